#include "topobreak/changepoint.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>

namespace topobreak {

CusumSeries cusum(const StatSeries& series) {
  const int n = series.n();
  if (n < 2) throw ConfigError("cusum: n >= 2 required");
  const double sqn = std::sqrt(static_cast<double>(n));
  Eigen::RowVectorXd prefix = Eigen::RowVectorXd::Zero(series.ell());
  Eigen::RowVectorXd total = series.values.colwise().sum();
  CusumSeries out;
  out.S.resize(n, series.ell());
  for (int v = 1; v <= n; ++v) {
    prefix += series.values.row(v - 1);
    out.S.row(v - 1) = (prefix - (static_cast<double>(v) / n) * total) / sqn;
  }
  return out;
}

LrcEstimate long_run_cov(const StatSeries& series, int bandwidth) {
  const int n = series.n();
  const int ell = series.ell();
  if (n < 2) throw ConfigError("long_run_cov: n >= 2 required");
  const int b = bandwidth < 0 ? static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))))
                              : bandwidth;
  if (n <= 2 * b) throw ConfigError("long_run_cov: n > 2*bandwidth required");

  Eigen::MatrixXd x = series.values.rowwise() - series.values.colwise().mean();
  Eigen::MatrixXd gamma = x.transpose() * x / n;
  for (int h = 1; h < b; ++h) {
    const double w = 1.0 - static_cast<double>(h) / b;
    Eigen::MatrixXd ch = x.topRows(n - h).transpose() * x.bottomRows(n - h) / n;
    gamma += w * (ch + ch.transpose());
  }
  gamma = 0.5 * (gamma + gamma.transpose()).eval();

  LrcEstimate est;
  est.gamma_hat = gamma;
  est.bandwidth = b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmax / lmin > 1e10) {
    est.ridge = 1e-8 * gamma.trace() / ell;
    est.ridge_applied = true;
  }
  return est;
}

namespace {

// Per-index quadratic forms S_v^T (Gamma + ridge I)^{-1} S_v; the all-zero
// CUSUM short-circuits to zero so a degenerate covariance never rejects.
Eigen::VectorXd quad_forms(const CusumSeries& S, const LrcEstimate& lrc) {
  const int n = static_cast<int>(S.S.rows());
  if (S.S.cwiseAbs().maxCoeff() < 1e-14) return Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd m = lrc.gamma_hat;
  m.diagonal().array() += lrc.ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NumericError("quadratic form: long-run covariance singular after ridge");
  Eigen::MatrixXd inv = es.eigenvectors() *
                        es.eigenvalues().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
  Eigen::VectorXd q(n);
  for (int v = 0; v < n; ++v) q[v] = S.S.row(v) * inv * S.S.row(v).transpose();
  return q;
}

}  // namespace

double lambda_stat(const CusumSeries& S, const LrcEstimate& lrc) {
  return quad_forms(S, lrc).maxCoeff();
}

double omega_stat(const CusumSeries& S, const LrcEstimate& lrc) {
  return quad_forms(S, lrc).mean();
}

double bridge_statistic_from_increments(Statistic statistic, int ell, int grid,
                                        const std::vector<double>& z, int stride) {
  if (grid % stride != 0) throw ConfigError("bridge statistic: stride must divide grid");
  const int g = grid / stride;
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid));
  std::vector<double> f(g, 0.0);  // sum over coordinates of B_i(t_j)^2
  for (int i = 0; i < ell; ++i) {
    const double* zi = z.data() + static_cast<std::size_t>(i) * grid;
    double w = 0.0;
    std::vector<double> path(g);
    for (int j = 0; j < g; ++j) {
      for (int s = 0; s < stride; ++s) w += zi[j * stride + s];
      path[j] = w * scale;
    }
    const double w1 = path[g - 1];
    for (int j = 0; j < g; ++j) {
      const double t = static_cast<double>(j + 1) / g;
      const double bb = path[j] - t * w1;
      f[j] += bb * bb;
    }
  }
  if (statistic == Statistic::Lambda) return *std::max_element(f.begin(), f.end());
  // trapezoid rule with B(0) = 0
  double acc = 0.5 * f[0];
  for (int j = 0; j + 1 < g; ++j) acc += 0.5 * (f[j] + f[j + 1]);
  return acc / g;
}

double QuantileTable::quantile(double level) const {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("quantile: level in (0,1) required");
  const std::size_t n = samples.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(level * n));
  if (idx == 0) idx = 1;
  if (idx > n) idx = n;
  return samples[idx - 1];
}

double QuantileTable::p_value(double observed) const {
  const auto ge = samples.end() - std::lower_bound(samples.begin(), samples.end(), observed);
  return static_cast<double>(ge) / static_cast<double>(samples.size());
}

QuantileTable simulate_limit_law(Statistic statistic, int ell, int grid, long n_rep,
                                 std::uint64_t seed) {
  if (ell < 1) throw ConfigError("simulate_limit_law: ell >= 1 required");
  if (grid < 1000) throw ConfigError("simulate_limit_law: grid >= 1000 required");
  if (n_rep < 1000) throw ConfigError("simulate_limit_law: n_rep >= 1000 required");
  QuantileTable table;
  table.statistic = statistic;
  table.ell = ell;
  table.grid = grid;
  table.n_rep = n_rep;
  table.seed = seed;
  table.levels = {0.90, 0.95, 0.99};
  table.samples.resize(n_rep);
  std::vector<double> z(static_cast<std::size_t>(ell) * grid);
  double s1 = 0.0, s2 = 0.0;
  for (long rep = 0; rep < n_rep; ++rep) {
    RngStream stream(seed, "limitlaw", static_cast<std::uint64_t>(rep));
    for (auto& v : z) v = stream.normal();
    const double val = bridge_statistic_from_increments(statistic, ell, grid, z);
    table.samples[rep] = val;
    s1 += val;
    s2 += val * val;
  }
  std::sort(table.samples.begin(), table.samples.end());
  table.mean = s1 / n_rep;
  table.variance = std::max(0.0, s2 / n_rep - table.mean * table.mean);
  for (double lv : table.levels) table.quantiles.push_back(table.quantile(lv));
  return table;
}

const QuantileTable& simulate_limit_law_cached(Statistic statistic, int ell, int grid,
                                               long n_rep, std::uint64_t seed) {
  using Key = std::tuple<int, int, int, long, std::uint64_t>;
  static std::map<Key, std::unique_ptr<QuantileTable>> cache;
  static std::shared_mutex mutex;
  const Key key{static_cast<int>(statistic), ell, grid, n_rep, seed};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<QuantileTable>(simulate_limit_law(statistic, ell, grid, n_rep, seed));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(table));
  return *it->second;
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("normal_quantile: level in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), level);
}

double normal_approx_cv(Statistic statistic, int ell, double level) {
  if (ell < 1) throw ConfigError("normal_approx_cv: ell >= 1 required");
  const double z = normal_quantile(level);
  if (statistic == Statistic::Lambda) return ell / 4.0 + z * std::sqrt(ell / 8.0);
  return ell / 6.0 + z * std::sqrt(ell / 45.0);
}

TestResult run_test(const StatSeries& series, Statistic statistic, double level,
                    const CvSettings& cv, int bandwidth) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("run_test: level in (0,1) required");
  if (cv.method == CvMethod::NormalApprox && series.ell() < 20)
    throw ConfigError("run_test: normal approximation requires ell >= 20");
  const CusumSeries S = cusum(series);
  const LrcEstimate lrc = long_run_cov(series, bandwidth);
  TestResult res;
  res.statistic = statistic;
  res.ell = series.ell();
  res.method = cv.method;
  res.bandwidth = lrc.bandwidth;
  res.ridge_applied = lrc.ridge_applied;
  res.value = statistic == Statistic::Lambda ? lambda_stat(S, lrc) : omega_stat(S, lrc);
  if (cv.method == CvMethod::SimulatedQuantile) {
    const QuantileTable& table =
        simulate_limit_law_cached(statistic, series.ell(), cv.grid, cv.n_rep, cv.seed);
    res.critical_value = table.quantile(1.0 - level);
    res.p_value = table.p_value(res.value);
  } else {
    res.critical_value = normal_approx_cv(statistic, series.ell(), 1.0 - level);
    const double center = statistic == Statistic::Lambda ? series.ell() / 4.0 : series.ell() / 6.0;
    const double sd = std::sqrt(statistic == Statistic::Lambda ? series.ell() / 8.0
                                                               : series.ell() / 45.0);
    res.p_value = boost::math::cdf(boost::math::complement(
        boost::math::normal_distribution<double>(), (res.value - center) / sd));
  }
  res.reject = res.value > res.critical_value;
  return res;
}

ChangePointEstimate estimate_changepoint(const StatSeries& series, CpWeighting weighting,
                                         int bandwidth) {
  const CusumSeries S = cusum(series);
  const int n = series.n();
  Eigen::VectorXd q;
  if (weighting == CpWeighting::InverseLrc) {
    q = quad_forms(S, long_run_cov(series, bandwidth));
  } else {
    q.resize(n);
    for (int v = 0; v < n; ++v) q[v] = S.S.row(v).squaredNorm();
  }
  ChangePointEstimate est;
  est.v_hat = 1;
  est.objective = q[0];
  for (int v = 1; v < n; ++v) {
    if (q[v] > est.objective) {
      est.objective = q[v];
      est.v_hat = v + 1;
    }
  }
  est.theta_hat = static_cast<double>(est.v_hat) / n;
  return est;
}

Eigen::VectorXd theoretical_drift(double theta, const Eigen::VectorXd& delta_mean, double t) {
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("drift: theta in (0,1) required");
  if (t < 0.0 || t > 1.0) throw ConfigError("drift: t in [0,1] required");
  if (t <= theta) return t * (1.0 - theta) * delta_mean;
  return (1.0 - t) * theta * delta_mean;
}

}  // namespace topobreak
