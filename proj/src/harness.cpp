#include "topobreak/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <json.hpp>
#include <thread>

#include "topobreak/persistence.hpp"

namespace topobreak {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string stat_name(Statistic s) { return s == Statistic::Lambda ? "lambda" : "omega"; }
std::string kind_name(FiltrationKind k) {
  return k == FiltrationKind::VietorisRips ? "vr" : "cech";
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return (fs::path(cfg.out_dir) / (cfg.run_id + "_" + name)).string();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Manifest: config echo, derived constants, wall clock, artifact list,
// library version. Timestamps live only here so CSV bodies stay byte-stable.
void write_manifest(const ExperimentConfig& cfg, const std::string& path, json derived,
                    const std::vector<std::string>& files, double wall_seconds) {
  json m;
  m["run_id"] = cfg.run_id;
  m["library_version"] = kVersion;
  m["schema_version"] = kSchemaVersion;
  m["config"] = serialize_config(cfg);
  m["derived"] = std::move(derived);
  m["wall_clock_seconds"] = wall_seconds;
  m["timestamp_utc"] = timestamp_utc();
  json names = json::array();
  for (const auto& f : files) names.push_back(fs::path(f).filename().string());
  m["artifacts"] = names;
  write_text(path, m.dump(2) + "\n");
}

void validate_pipeline(const ExperimentConfig& cfg) {
  cfg.generator.validate();
  if (cfg.k < 0) throw ConfigError("feature.k >= 0 required");
  if (cfg.k + 2 > cfg.generator.r) throw ConfigError("feature.k + 2 <= generator.r required");
  if (cfg.dim_cap < cfg.k + 1)
    throw ConfigError("filtration.dim_cap >= feature.k + 1 required for dimension-k deaths");
  if (cfg.dim_cap > cfg.generator.r - 1)
    throw ConfigError("filtration.dim_cap <= r - 1 required");
  if (cfg.replications < 1) throw ConfigError("replications >= 1 required");
  if (cfg.threads < 1) throw ConfigError("threads >= 1 required");
  if (cfg.feature_map.empty()) throw ConfigError("feature.map must be non-empty");
}

struct ChronoTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Runs body(rep) for rep in [0, n) on cfg.threads workers; replication order
// never affects results because each replication derives its own streams.
template <typename Body>
void replication_pool(const ExperimentConfig& cfg, long n, Body body) {
  const int workers = static_cast<int>(std::min<long>(cfg.threads, n));
  if (workers <= 1) {
    for (long rep = 0; rep < n; ++rep) body(rep);
    return;
  }
  std::atomic<long> next{0};
  std::atomic<long> failed_rep{-1};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long rep = next.fetch_add(1);
      if (rep >= n || failed_rep.load() >= 0) return;
      try {
        body(rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (failed_rep.load() < 0 || rep < failed_rep.load()) {
          failed_rep.store(rep);
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) {
    const std::string where = "replication " + std::to_string(failed_rep.load()) + ": ";
    try {
      std::rethrow_exception(error);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const NumericError& e) {
      throw NumericError(where + e.what());
    } catch (const IoError& e) {
      throw IoError(where + e.what());
    } catch (const std::exception& e) {
      throw NumericError(where + e.what());
    }
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Eigen::VectorXd cloud_features(const PointCloud& x, const ExperimentConfig& cfg, double T,
                               RngStream* tie_stream) {
  FilteredComplex c = build_filtration(x, cfg.filtration, cfg.dim_cap);
  PersistenceDiagram pd = compute_persistence(c, cfg.k, T);
  pd = pad_diagram(std::move(pd), n_features(cfg.generator.r, cfg.k));
  const FeatureVector z = feature_vector(pd, cfg.tie_break, tie_stream);
  return feature_map(z, cfg.feature_map);
}

StatSeries series_features(const std::vector<PointCloud>& series, const ExperimentConfig& cfg,
                           std::uint64_t rep_seed) {
  const double T = filtration_cap(cfg.filtration, cfg.generator.M);
  StatSeries out;
  out.values.resize(static_cast<int>(series.size()), static_cast<int>(cfg.feature_map.size()));
  for (std::size_t t = 0; t < series.size(); ++t) {
    RngStream tie(rep_seed, "tiebreak", static_cast<std::uint64_t>(t + 1));
    out.values.row(static_cast<int>(t)) = cloud_features(series[t], cfg, T, &tie).transpose();
  }
  return out;
}

RepOutcome run_replication(const ExperimentConfig& cfg, long rep) {
  const std::uint64_t rep_seed =
      RngStream::derive_seed(cfg.seed, "rep", static_cast<std::uint64_t>(rep), 0);
  const std::vector<PointCloud> series = cfg.has_break
                                             ? inject_break(cfg.generator, cfg.brk, rep_seed)
                                             : gen_series(cfg.generator, rep_seed);
  const StatSeries stats = series_features(series, cfg, rep_seed);
  RepOutcome out;
  out.test = run_test(stats, cfg.statistic, cfg.level, cfg.cv, cfg.bandwidth);
  if (cfg.estimate_cp) {
    out.cp = estimate_changepoint(stats, CpWeighting::InverseLrc, cfg.bandwidth);
    out.has_cp = true;
  }
  return out;
}

RunResult cmd_stability(const ExperimentConfig& cfg) {
  ChronoTimer timer;
  const Domain& M = cfg.generator.M;
  if (M.dim() == 0) throw ConfigError("stability: generator.domain required");
  if (cfg.generator.r < 2) throw ConfigError("stability: generator.r >= 2 required");
  if (cfg.stability_samples < 1) throw ConfigError("stability: samples >= 1 required");
  if (!(cfg.stability_t_lo > 0.0 && cfg.stability_t_lo < cfg.stability_t_hi))
    throw ConfigError("stability: need 0 < t_lo < t_hi");

  const SublevelCurve curve = estimate_sublevel(cfg.filtration, M, cfg.generator.r, cfg.dim_cap,
                                                default_t_grid(M), cfg.stability_samples,
                                                cfg.seed);
  const double diam = M.diameter();
  const AlphaFit fit = fit_alpha(curve, cfg.stability_t_lo * diam, cfg.stability_t_hi * diam);

  std::string csv = "t,p_hat,stderr,n_samples,kind,r,d\n";
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    csv += fmt17(curve.t_grid[i]) + "," + fmt17(curve.p_hat[i]) + "," +
           fmt17(curve.stderr_[i]) + "," + std::to_string(curve.n_samples) + "," +
           kind_name(curve.kind) + "," + std::to_string(curve.r) + "," +
           std::to_string(curve.d) + "\n";
  }

  json alpha;
  alpha["alpha_hat"] = fit.alpha_hat;
  alpha["intercept"] = fit.intercept;
  alpha["stderr"] = fit.stderr_;
  alpha["n_points"] = fit.n_points;
  alpha["window_t_lo"] = cfg.stability_t_lo * diam;
  alpha["window_t_hi"] = cfg.stability_t_hi * diam;
  alpha["target_alpha"] = cfg.filtration == FiltrationKind::VietorisRips ? 1.0 : 0.5;
  alpha["kind"] = kind_name(cfg.filtration);

  RunResult res;
  res.files.push_back(out_path(cfg, "stability.csv"));
  write_text(res.files.back(), csv);
  res.files.push_back(out_path(cfg, "alpha.json"));
  write_text(res.files.back(), alpha.dump(2) + "\n");

  json derived;
  derived["diam"] = diam;
  derived["c_star"] = gradient_bound(cfg.filtration);
  derived["T"] = filtration_cap(cfg.filtration, M);
  res.files.push_back(out_path(cfg, "manifest.json"));
  write_manifest(cfg, res.files.back(), derived, res.files, timer.seconds());
  return res;
}

RunResult cmd_critvals(const ExperimentConfig& cfg) {
  ChronoTimer timer;
  const QuantileTable table = simulate_limit_law(cfg.critvals_statistic, cfg.critvals_ell,
                                                 cfg.cv.grid, cfg.cv.n_rep, cfg.seed);
  std::string csv = "statistic,ell,level,quantile,n_rep,grid,seed\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    csv += stat_name(table.statistic) + "," + std::to_string(table.ell) + "," +
           fmt17(table.levels[i]) + "," + fmt17(table.quantiles[i]) + "," +
           std::to_string(table.n_rep) + "," + std::to_string(table.grid) + "," +
           std::to_string(table.seed) + "\n";
  }
  RunResult res;
  res.files.push_back(out_path(cfg, "critvals.csv"));
  write_text(res.files.back(), csv);

  json derived;
  derived["mean"] = table.mean;
  derived["variance"] = table.variance;
  res.files.push_back(out_path(cfg, "manifest.json"));
  write_manifest(cfg, res.files.back(), derived, res.files, timer.seconds());
  return res;
}

RunResult cmd_test(const ExperimentConfig& cfg) {
  ChronoTimer timer;
  validate_pipeline(cfg);
  if (cfg.has_break) validate_break(cfg.generator, cfg.brk);
  const int ell = static_cast<int>(cfg.feature_map.size());
  if (cfg.cv.method == CvMethod::SimulatedQuantile)
    simulate_limit_law_cached(cfg.statistic, ell, cfg.cv.grid, cfg.cv.n_rep, cfg.cv.seed);

  std::vector<RepOutcome> outcomes(cfg.replications);
  replication_pool(cfg, cfg.replications,
                   [&](long rep) { outcomes[rep] = run_replication(cfg, rep); });

  std::string csv = "rep,statistic,value,critical_value,p_value,reject,bandwidth,ridge_applied,"
                    "v_hat,theta_hat\n";
  double reject_sum = 0.0;
  std::vector<double> theta_err;
  for (long rep = 0; rep < cfg.replications; ++rep) {
    const RepOutcome& o = outcomes[rep];
    reject_sum += o.test.reject ? 1.0 : 0.0;
    csv += std::to_string(rep) + "," + stat_name(o.test.statistic) + "," + fmt17(o.test.value) +
           "," + fmt17(o.test.critical_value) + "," + fmt17(o.test.p_value) + "," +
           (o.test.reject ? "1" : "0") + "," + std::to_string(o.test.bandwidth) + "," +
           (o.test.ridge_applied ? "1" : "0") + ",";
    if (o.has_cp) {
      csv += std::to_string(o.cp.v_hat) + "," + fmt17(o.cp.theta_hat);
      if (cfg.has_break) theta_err.push_back(std::abs(o.cp.theta_hat - cfg.brk.theta));
    } else {
      csv += ",";
    }
    csv += "\n";
  }

  json summary;
  summary["n_replications"] = cfg.replications;
  summary["statistic"] = stat_name(cfg.statistic);
  summary["level"] = cfg.level;
  summary["ell"] = ell;
  summary["rejection_rate"] = reject_sum / cfg.replications;
  if (!theta_err.empty()) summary["median_abs_theta_error"] = median(theta_err);

  RunResult res;
  res.files.push_back(out_path(cfg, "results.csv"));
  write_text(res.files.back(), csv);
  res.files.push_back(out_path(cfg, "summary.json"));
  write_text(res.files.back(), summary.dump(2) + "\n");

  json derived;
  derived["N_k"] = n_features(cfg.generator.r, cfg.k);
  derived["T"] = filtration_cap(cfg.filtration, cfg.generator.M);
  derived["c_star"] = gradient_bound(cfg.filtration);
  derived["ell"] = ell;
  derived["bandwidth"] = outcomes.front().test.bandwidth;
  derived["ridge_applied"] = outcomes.front().test.ridge_applied;
  res.files.push_back(out_path(cfg, "manifest.json"));
  write_manifest(cfg, res.files.back(), derived, res.files, timer.seconds());
  return res;
}

RunResult cmd_approx(const ExperimentConfig& cfg) {
  ChronoTimer timer;
  const ApproxProfile prof =
      approx_profile(cfg.generator, cfg.approx_p, cfg.approx_m_list, cfg.approx_n_mc,
                     cfg.approx_delta, cfg.approx_alpha, cfg.seed);
  std::string csv = "m,nu_hat,stderr,weighted_partial\n";
  for (std::size_t i = 0; i < prof.m_list.size(); ++i) {
    csv += std::to_string(prof.m_list[i]) + "," + fmt17(prof.nu_hat[i]) + "," +
           fmt17(prof.stderr_[i]) + "," + fmt17(prof.weighted_partial[i]) + "\n";
  }
  RunResult res;
  res.files.push_back(out_path(cfg, "approx.csv"));
  write_text(res.files.back(), csv);

  json derived;
  derived["p"] = prof.p;
  derived["delta"] = prof.delta;
  derived["alpha"] = prof.alpha;
  derived["weight_exponent"] = (1.0 + prof.delta) * prof.p / prof.alpha;
  res.files.push_back(out_path(cfg, "manifest.json"));
  write_manifest(cfg, res.files.back(), derived, res.files, timer.seconds());
  return res;
}

RunResult cmd_simulate(const ExperimentConfig& cfg) {
  ChronoTimer timer;
  cfg.generator.validate();
  if (cfg.has_break) validate_break(cfg.generator, cfg.brk);
  const std::uint64_t rep_seed = RngStream::derive_seed(cfg.seed, "rep", 0, 0);
  const std::vector<PointCloud> series = cfg.has_break
                                             ? inject_break(cfg.generator, cfg.brk, rep_seed)
                                             : gen_series(cfg.generator, rep_seed);
  const int d = cfg.generator.M.dim();
  std::string csv = "t,point_index";
  for (int c = 0; c < d; ++c) csv += ",coord_" + std::to_string(c);
  csv += "\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    for (int i = 0; i < series[t].size(); ++i) {
      csv += std::to_string(t + 1) + "," + std::to_string(i);
      for (int c = 0; c < d; ++c) csv += "," + fmt17(series[t].points[i][c]);
      csv += "\n";
    }
  }

  const double T = filtration_cap(cfg.filtration, cfg.generator.M);
  std::string diag = "t,k,birth,death,essential,trivial\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    const FilteredComplex c = build_filtration(series[t], cfg.filtration, cfg.dim_cap);
    for (const PersistenceDiagram& pd : compute_all_persistence(c, T)) {
      PersistenceDiagram padded = pad_diagram(pd, n_features(cfg.generator.r, pd.k));
      for (const PersistencePair& pr : padded.pairs) {
        diag += std::to_string(t + 1) + "," + std::to_string(padded.k) + "," + fmt17(pr.birth) +
                "," + fmt17(pr.death) + "," + (pr.essential ? "1" : "0") + "," +
                (pr.trivial ? "1" : "0") + "\n";
      }
    }
  }

  RunResult res;
  res.files.push_back(out_path(cfg, "series.csv"));
  write_text(res.files.back(), csv);
  res.files.push_back(out_path(cfg, "diagrams.csv"));
  write_text(res.files.back(), diag);

  json derived;
  derived["T"] = T;
  derived["c_star"] = gradient_bound(cfg.filtration);
  res.files.push_back(out_path(cfg, "manifest.json"));
  write_manifest(cfg, res.files.back(), derived, res.files, timer.seconds());
  return res;
}

}  // namespace topobreak
