#include "topobreak/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace topobreak {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) { return static_cast<int>(parse_long(v, line)); }

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected an unsigned integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

Eigen::VectorXd parse_vecd(const std::string& v, int line) {
  const auto parts = split_commas(v);
  Eigen::VectorXd out(static_cast<int>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) out[static_cast<int>(i)] = parse_double(parts[i], line);
  return out;
}

std::vector<int> parse_veci(const std::string& v, int line) {
  const auto parts = split_commas(v);
  std::vector<int> out;
  for (const auto& p : parts) out.push_back(parse_int(p, line));
  return out;
}

FeatureMapSpec parse_feature_map(const std::string& v, int line) {
  FeatureMapSpec spec;
  for (const auto& tok : split_commas(v)) {
    FeatureComponent c;
    if (tok.rfind("tp:", 0) == 0) {
      c.kind = FeatureComponent::Kind::TotalPersistence;
      const std::string g = tok.substr(3);
      c.gamma = g == "inf" ? std::numeric_limits<double>::infinity() : parse_double(g, line);
    } else if (tok == "max") {
      c.kind = FeatureComponent::Kind::MaxPersistence;
    } else if (tok == "mean_birth") {
      c.kind = FeatureComponent::Kind::MeanBirth;
    } else if (tok == "mean_death") {
      c.kind = FeatureComponent::Kind::MeanDeath;
    } else {
      fail(line, "unknown feature map component '" + tok + "'");
    }
    spec.push_back(c);
  }
  if (spec.empty()) fail(line, "feature.map must list at least one component");
  return spec;
}

std::string join_vecd(const Eigen::VectorXd& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt17(v[i]);
  }
  return out;
}

std::string join_veci(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string feature_map_str(const FeatureMapSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i) out += ",";
    switch (spec[i].kind) {
      case FeatureComponent::Kind::TotalPersistence:
        out += std::isinf(spec[i].gamma) ? "tp:inf" : "tp:" + fmt17(spec[i].gamma);
        break;
      case FeatureComponent::Kind::MaxPersistence: out += "max"; break;
      case FeatureComponent::Kind::MeanBirth: out += "mean_birth"; break;
      case FeatureComponent::Kind::MeanDeath: out += "mean_death"; break;
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_schema = false;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");

    if (key == "schema_version") {
      if (parse_int(val, line) != kSchemaVersion)
        fail(line, "unsupported schema_version '" + val + "'");
      saw_schema = true;
    } else if (key == "run_id") {
      if (val.empty()) fail(line, "run_id must be non-empty");
      cfg.run_id = val;
    } else if (key == "seed") {
      cfg.seed = parse_u64(val, line);
    } else if (key == "replications") {
      cfg.replications = parse_long(val, line);
    } else if (key == "threads") {
      cfg.threads = parse_int(val, line);
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "generator.kind") {
      if (val == "iid") cfg.generator.generator = CloudSeriesSpec::Generator::IidClouds;
      else if (val == "delay") cfg.generator.generator = CloudSeriesSpec::Generator::DelayEmbedding;
      else fail(line, "generator.kind must be iid or delay");
    } else if (key == "generator.n") {
      cfg.generator.n = parse_int(val, line);
    } else if (key == "generator.r") {
      cfg.generator.r = parse_int(val, line);
    } else if (key == "generator.domain.lo") {
      cfg.generator.M.lo = parse_vecd(val, line);
    } else if (key == "generator.domain.hi") {
      cfg.generator.M.hi = parse_vecd(val, line);
    } else if (key == "generator.innovation.dist") {
      if (val == "uniform") cfg.generator.innovation.dist = InnovationSpec::Dist::UniformBox;
      else if (val == "truncated_gaussian")
        cfg.generator.innovation.dist = InnovationSpec::Dist::TruncatedGaussian;
      else fail(line, "generator.innovation.dist must be uniform or truncated_gaussian");
    } else if (key == "generator.innovation.lo") {
      cfg.generator.innovation.lo = parse_vecd(val, line);
    } else if (key == "generator.innovation.hi") {
      cfg.generator.innovation.hi = parse_vecd(val, line);
    } else if (key == "generator.innovation.mean") {
      cfg.generator.innovation.mean = parse_vecd(val, line);
    } else if (key == "generator.innovation.sd") {
      cfg.generator.innovation.sd = parse_double(val, line);
    } else if (key == "generator.linear.beta") {
      cfg.generator.linear.decay_exponent = parse_double(val, line);
    } else if (key == "generator.linear.scale") {
      cfg.generator.linear.scale = parse_double(val, line);
    } else if (key == "generator.linear.lag") {
      cfg.generator.linear.truncation_lag = parse_int(val, line);
    } else if (key == "break.enabled") {
      cfg.has_break = parse_bool(val, line);
    } else if (key == "break.kind") {
      if (val == "mean_shift") cfg.brk.kind = BreakSpec::Kind::MeanShift;
      else if (val == "scale_change") cfg.brk.kind = BreakSpec::Kind::ScaleChange;
      else fail(line, "break.kind must be mean_shift or scale_change");
    } else if (key == "break.theta") {
      cfg.brk.theta = parse_double(val, line);
    } else if (key == "break.shift") {
      cfg.brk.shift = parse_vecd(val, line);
    } else if (key == "break.factor") {
      cfg.brk.factor = parse_double(val, line);
    } else if (key == "filtration.kind") {
      if (val == "vr") cfg.filtration = FiltrationKind::VietorisRips;
      else if (val == "cech") cfg.filtration = FiltrationKind::Cech;
      else fail(line, "filtration.kind must be vr or cech");
    } else if (key == "filtration.dim_cap") {
      cfg.dim_cap = parse_int(val, line);
    } else if (key == "feature.k") {
      cfg.k = parse_int(val, line);
    } else if (key == "feature.tie_break") {
      if (val == "deterministic") cfg.tie_break = TieBreak::Deterministic;
      else if (val == "seeded_random") cfg.tie_break = TieBreak::SeededRandom;
      else fail(line, "feature.tie_break must be deterministic or seeded_random");
    } else if (key == "feature.map") {
      cfg.feature_map = parse_feature_map(val, line);
    } else if (key == "test.statistic") {
      if (val == "lambda") cfg.statistic = Statistic::Lambda;
      else if (val == "omega") cfg.statistic = Statistic::Omega;
      else fail(line, "test.statistic must be lambda or omega");
    } else if (key == "test.level") {
      cfg.level = parse_double(val, line);
    } else if (key == "test.cv_method") {
      if (val == "simulated") cfg.cv.method = CvMethod::SimulatedQuantile;
      else if (val == "normal") cfg.cv.method = CvMethod::NormalApprox;
      else fail(line, "test.cv_method must be simulated or normal");
    } else if (key == "test.cv_grid") {
      cfg.cv.grid = parse_int(val, line);
    } else if (key == "test.cv_n_rep") {
      cfg.cv.n_rep = parse_long(val, line);
    } else if (key == "test.cv_seed") {
      cfg.cv.seed = parse_u64(val, line);
    } else if (key == "test.bandwidth") {
      cfg.bandwidth = parse_int(val, line);
    } else if (key == "test.estimate_changepoint") {
      cfg.estimate_cp = parse_bool(val, line);
    } else if (key == "stability.samples") {
      cfg.stability_samples = parse_long(val, line);
    } else if (key == "stability.t_lo") {
      cfg.stability_t_lo = parse_double(val, line);
    } else if (key == "stability.t_hi") {
      cfg.stability_t_hi = parse_double(val, line);
    } else if (key == "approx.p") {
      cfg.approx_p = parse_double(val, line);
    } else if (key == "approx.m_list") {
      cfg.approx_m_list = parse_veci(val, line);
    } else if (key == "approx.n_mc") {
      cfg.approx_n_mc = parse_long(val, line);
    } else if (key == "approx.delta") {
      cfg.approx_delta = parse_double(val, line);
    } else if (key == "approx.alpha") {
      cfg.approx_alpha = parse_double(val, line);
    } else if (key == "critvals.statistic") {
      if (val == "lambda") cfg.critvals_statistic = Statistic::Lambda;
      else if (val == "omega") cfg.critvals_statistic = Statistic::Omega;
      else fail(line, "critvals.statistic must be lambda or omega");
    } else if (key == "critvals.ell") {
      cfg.critvals_ell = parse_int(val, line);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (!saw_schema) throw ConfigError("config: missing schema_version");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "schema_version = " << kSchemaVersion << "\n";
  out << "run_id = " << cfg.run_id << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "replications = " << cfg.replications << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  out << "generator.kind = "
      << (cfg.generator.generator == CloudSeriesSpec::Generator::IidClouds ? "iid" : "delay")
      << "\n";
  out << "generator.n = " << cfg.generator.n << "\n";
  out << "generator.r = " << cfg.generator.r << "\n";
  out << "generator.domain.lo = " << join_vecd(cfg.generator.M.lo) << "\n";
  out << "generator.domain.hi = " << join_vecd(cfg.generator.M.hi) << "\n";
  out << "generator.innovation.dist = "
      << (cfg.generator.innovation.dist == InnovationSpec::Dist::UniformBox ? "uniform"
                                                                            : "truncated_gaussian")
      << "\n";
  out << "generator.innovation.lo = " << join_vecd(cfg.generator.innovation.lo) << "\n";
  out << "generator.innovation.hi = " << join_vecd(cfg.generator.innovation.hi) << "\n";
  out << "generator.innovation.mean = " << join_vecd(cfg.generator.innovation.mean) << "\n";
  out << "generator.innovation.sd = " << fmt17(cfg.generator.innovation.sd) << "\n";
  out << "generator.linear.beta = " << fmt17(cfg.generator.linear.decay_exponent) << "\n";
  out << "generator.linear.scale = " << fmt17(cfg.generator.linear.scale) << "\n";
  out << "generator.linear.lag = " << cfg.generator.linear.truncation_lag << "\n";
  out << "break.enabled = " << (cfg.has_break ? "true" : "false") << "\n";
  out << "break.kind = "
      << (cfg.brk.kind == BreakSpec::Kind::MeanShift ? "mean_shift" : "scale_change") << "\n";
  out << "break.theta = " << fmt17(cfg.brk.theta) << "\n";
  out << "break.shift = " << join_vecd(cfg.brk.shift) << "\n";
  out << "break.factor = " << fmt17(cfg.brk.factor) << "\n";
  out << "filtration.kind = " << (cfg.filtration == FiltrationKind::VietorisRips ? "vr" : "cech")
      << "\n";
  out << "filtration.dim_cap = " << cfg.dim_cap << "\n";
  out << "feature.k = " << cfg.k << "\n";
  out << "feature.tie_break = "
      << (cfg.tie_break == TieBreak::Deterministic ? "deterministic" : "seeded_random") << "\n";
  out << "feature.map = " << feature_map_str(cfg.feature_map) << "\n";
  out << "test.statistic = " << (cfg.statistic == Statistic::Lambda ? "lambda" : "omega") << "\n";
  out << "test.level = " << fmt17(cfg.level) << "\n";
  out << "test.cv_method = "
      << (cfg.cv.method == CvMethod::SimulatedQuantile ? "simulated" : "normal") << "\n";
  out << "test.cv_grid = " << cfg.cv.grid << "\n";
  out << "test.cv_n_rep = " << cfg.cv.n_rep << "\n";
  out << "test.cv_seed = " << cfg.cv.seed << "\n";
  out << "test.bandwidth = " << cfg.bandwidth << "\n";
  out << "test.estimate_changepoint = " << (cfg.estimate_cp ? "true" : "false") << "\n";
  out << "stability.samples = " << cfg.stability_samples << "\n";
  out << "stability.t_lo = " << fmt17(cfg.stability_t_lo) << "\n";
  out << "stability.t_hi = " << fmt17(cfg.stability_t_hi) << "\n";
  out << "approx.p = " << fmt17(cfg.approx_p) << "\n";
  out << "approx.m_list = " << join_veci(cfg.approx_m_list) << "\n";
  out << "approx.n_mc = " << cfg.approx_n_mc << "\n";
  out << "approx.delta = " << fmt17(cfg.approx_delta) << "\n";
  out << "approx.alpha = " << fmt17(cfg.approx_alpha) << "\n";
  out << "critvals.statistic = "
      << (cfg.critvals_statistic == Statistic::Lambda ? "lambda" : "omega") << "\n";
  out << "critvals.ell = " << cfg.critvals_ell << "\n";
  return out.str();
}

}  // namespace topobreak
