#include "topobreak/procgen.hpp"

#include <cmath>
#include <functional>

namespace topobreak {

double LinearProcessSpec::coefficient(int k) const {
  return scale * std::pow(static_cast<double>(k + 1), -decay_exponent);
}

void CloudSeriesSpec::validate() const {
  if (n < 2) throw ConfigError("series: n >= 2 required");
  if (r < 2) throw ConfigError("series: r >= 2 required");
  if (M.dim() == 0) throw ConfigError("series: domain missing");
  if (innovation.dim() != M.dim()) throw ConfigError("series: innovation dim != domain dim");
  for (int i = 0; i < innovation.dim(); ++i) {
    if (!std::isfinite(innovation.lo[i]) || !std::isfinite(innovation.hi[i]) ||
        innovation.lo[i] > innovation.hi[i])
      throw ConfigError("series: innovation box must be finite with lo <= hi");
  }
  if (innovation.dist == InnovationSpec::Dist::TruncatedGaussian) {
    if (innovation.sd <= 0.0) throw ConfigError("series: innovation sd > 0 required");
    if (innovation.mean.size() != innovation.dim())
      throw ConfigError("series: innovation mean dim mismatch");
  }
  if (generator == Generator::DelayEmbedding) {
    if (linear.truncation_lag < 1) throw ConfigError("series: truncation lag K >= 1 required");
    if (linear.decay_exponent <= 1.0) throw ConfigError("series: decay exponent beta > 1 required");
  }
}

namespace {

Eigen::VectorXd draw_innovation(const InnovationSpec& spec, RngStream& stream) {
  Eigen::VectorXd v(spec.dim());
  if (spec.dist == InnovationSpec::Dist::UniformBox) {
    for (int i = 0; i < spec.dim(); ++i) v[i] = stream.uniform(spec.lo[i], spec.hi[i]);
    return v;
  }
  for (int i = 0; i < spec.dim(); ++i) {
    double x = 0.0;
    bool ok = false;
    for (int it = 0; it < 100000; ++it) {
      x = spec.mean[i] + spec.sd * stream.normal();
      if (x >= spec.lo[i] && x <= spec.hi[i]) { ok = true; break; }
    }
    if (!ok) throw NumericError("truncated gaussian: rejection sampling failed");
    v[i] = x;
  }
  return v;
}

std::uint64_t time_key(long t) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(t)); }

// Innovation at absolute time s, as seen by the m-coupled copy attached to
// time t: the original stream for lags < m, an independent per-t copy beyond.
using InnovationLookup = std::function<Eigen::VectorXd(long s)>;

Eigen::VectorXd delay_point(const CloudSeriesSpec& spec, long t, int i,
                            const InnovationLookup& eps) {
  // Point i of cloud t is Y_{t-i} for the truncated linear process.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(spec.M.dim());
  for (int k = 0; k <= spec.linear.truncation_lag; ++k)
    y += spec.linear.coefficient(k) * eps(t - i - k);
  return spec.M.clip(y);
}

PointCloud iid_cloud(const CloudSeriesSpec& spec, long t, std::uint64_t seed) {
  RngStream stream(seed, "cloud", time_key(t));
  PointCloud x;
  x.points.reserve(spec.r);
  for (int i = 0; i < spec.r; ++i)
    x.points.push_back(spec.M.clip(draw_innovation(spec.innovation, stream)));
  return x;
}

PointCloud delay_cloud(const CloudSeriesSpec& spec, long t, const InnovationLookup& eps) {
  PointCloud x;
  x.points.reserve(spec.r);
  for (int i = 0; i < spec.r; ++i) x.points.push_back(delay_point(spec, t, i, eps));
  return x;
}

InnovationLookup base_lookup(const CloudSeriesSpec& spec, std::uint64_t seed) {
  return [&spec, seed](long s) {
    RngStream stream(seed, "innov", time_key(s));
    return draw_innovation(spec.innovation, stream);
  };
}

}  // namespace

std::vector<PointCloud> gen_series(const CloudSeriesSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<PointCloud> out;
  out.reserve(spec.n);
  if (spec.generator == CloudSeriesSpec::Generator::IidClouds) {
    for (long t = 1; t <= spec.n; ++t) out.push_back(iid_cloud(spec, t, seed));
    return out;
  }
  const InnovationLookup eps = base_lookup(spec, seed);
  for (long t = 1; t <= spec.n; ++t) out.push_back(delay_cloud(spec, t, eps));
  return out;
}

std::vector<std::pair<PointCloud, PointCloud>> gen_m_coupled(const CloudSeriesSpec& spec,
                                                             int m, std::uint64_t seed) {
  spec.validate();
  if (m < 1) throw ConfigError("gen_m_coupled: m >= 1 required");
  std::vector<std::pair<PointCloud, PointCloud>> out;
  out.reserve(spec.n);
  if (spec.generator == CloudSeriesSpec::Generator::IidClouds) {
    // The kernel touches only the lag-0 innovation, so the coupled copy is the
    // original for every m >= 1.
    for (long t = 1; t <= spec.n; ++t) {
      PointCloud x = iid_cloud(spec, t, seed);
      out.emplace_back(x, x);
    }
    return out;
  }
  const InnovationLookup eps = base_lookup(spec, seed);
  for (long t = 1; t <= spec.n; ++t) {
    const InnovationLookup coupled = [&spec, seed, t, m, &eps](long s) {
      if (s > t - m) return eps(s);
      RngStream stream(seed, "innov_copy", time_key(t), time_key(s));
      return draw_innovation(spec.innovation, stream);
    };
    out.emplace_back(delay_cloud(spec, t, eps), delay_cloud(spec, t, coupled));
  }
  return out;
}

ApproxProfile approx_profile(const CloudSeriesSpec& spec, double p,
                             const std::vector<int>& m_list, long n_mc, double delta,
                             double alpha, std::uint64_t seed) {
  spec.validate();
  if (p < 1.0) throw ConfigError("approx_profile: p >= 1 required");
  if (n_mc < 2) throw ConfigError("approx_profile: n_mc >= 2 required");
  ApproxProfile prof;
  prof.m_list = m_list;
  prof.p = p;
  prof.delta = delta;
  prof.alpha = alpha;

  CloudSeriesSpec one = spec;
  one.n = 2;  // validate() floor; only t = 1 is used below
  double partial = 0.0;
  for (int m : m_list) {
    if (m < 1) throw ConfigError("approx_profile: m >= 1 required");
    std::vector<double> s1(spec.r, 0.0), s2(spec.r, 0.0);
    for (long rep = 0; rep < n_mc; ++rep) {
      const std::uint64_t rep_seed = RngStream::derive_seed(seed, "approx", rep, 0);
      auto pair = gen_m_coupled(one, m, rep_seed)[0];
      for (int i = 0; i < spec.r; ++i) {
        const double v = std::pow((pair.first.points[i] - pair.second.points[i]).norm(), p);
        s1[i] += v;
        s2[i] += v * v;
      }
    }
    double max_mean = 0.0, max_se = 0.0;
    for (int i = 0; i < spec.r; ++i) {
      const double mean = s1[i] / n_mc;
      const double var = std::max(0.0, s2[i] / n_mc - mean * mean);
      const double se_mean = std::sqrt(var / n_mc);
      const double nu = std::pow(mean, 1.0 / p);
      const double se = mean > 0.0 ? se_mean / p * std::pow(mean, 1.0 / p - 1.0) : 0.0;
      if (nu > max_mean) { max_mean = nu; max_se = se; }
    }
    prof.nu_hat.push_back(max_mean);
    prof.stderr_.push_back(max_se);
    partial += std::pow(static_cast<double>(m), (1.0 + delta) * p / alpha) * max_mean;
    prof.weighted_partial.push_back(partial);
  }
  return prof;
}

void validate_break(const CloudSeriesSpec& spec, const BreakSpec& brk) {
  if (!(brk.theta > 0.0 && brk.theta < 1.0)) throw ConfigError("break: theta in (0,1) required");
  const long v = static_cast<long>(std::floor(spec.n * brk.theta));
  if (v < 1 || v >= spec.n) throw ConfigError("break: floor(n*theta) must lie in [1, n-1]");
  if (brk.kind == BreakSpec::Kind::MeanShift) {
    if (brk.shift.size() != spec.M.dim()) throw ConfigError("break: shift dim != domain dim");
    for (int i = 0; i < spec.M.dim(); ++i)
      if (std::abs(brk.shift[i]) >= spec.M.hi[i] - spec.M.lo[i])
        throw ConfigError("break: shift pushes every point onto the boundary");
  } else {
    if (!(brk.factor > 0.0)) throw ConfigError("break: scale factor > 0 required");
  }
}

std::vector<PointCloud> inject_break(const CloudSeriesSpec& spec, const BreakSpec& brk,
                                     std::uint64_t seed) {
  spec.validate();
  validate_break(spec, brk);
  std::vector<PointCloud> series = gen_series(spec, seed);
  const long v_star = static_cast<long>(std::floor(spec.n * brk.theta));
  const Eigen::VectorXd center = spec.M.center();
  for (long t = v_star + 1; t <= spec.n; ++t) {
    for (auto& pt : series[t - 1].points) {
      if (brk.kind == BreakSpec::Kind::MeanShift)
        pt = spec.M.clip(pt + brk.shift);
      else
        pt = spec.M.clip(center + brk.factor * (pt - center));
    }
  }
  return series;
}

}  // namespace topobreak
