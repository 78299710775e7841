#include "topobreak/stability.hpp"

#include <algorithm>
#include <cmath>

#include "topobreak/persistence.hpp"

namespace topobreak {

namespace {

double min_gap_or_cap(std::vector<double>& vals, double divisor, double cap) {
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  if (vals.size() < 2) return cap;
  double gap = vals[1] - vals[0];
  for (std::size_t i = 2; i < vals.size(); ++i) gap = std::min(gap, vals[i] - vals[i - 1]);
  return gap / divisor;
}

}  // namespace

RhoEstimate rho_lower(const PointCloud& x, FiltrationKind kind, int dim_cap, double cap) {
  const int r = x.size();
  FilteredComplex c = build_filtration(x, kind, dim_cap);
  std::vector<double> vals;
  vals.reserve(c.simplices.size());
  // Singleton values (identically 0) are excluded from the gap computation.
  for (const auto& s : c.simplices)
    if (s.dim >= 1) vals.push_back(s.value);
  const double cstar = gradient_bound(kind);
  RhoEstimate est;
  est.kind = RhoEstimate::Kind::LowerBoundGeneric;
  est.value = min_gap_or_cap(vals, 2.0 * cstar * std::sqrt(static_cast<double>(r)), cap);
  return est;
}

RhoEstimate rho_vr_gap(const PointCloud& x, double cap) {
  const int r = x.size();
  if (r < 2) throw ConfigError("rho_vr_gap: need r >= 2");
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(r) * (r - 1) / 2);
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      dist.push_back((x.points[i] - x.points[j]).norm());
  RhoEstimate est;
  est.kind = RhoEstimate::Kind::ExactGapVR;
  est.value = min_gap_or_cap(dist, 4.0, cap);
  return est;
}

PointCloud sample_uniform_cloud(const Domain& M, int r, RngStream& stream) {
  PointCloud x;
  x.points.reserve(r);
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXd p(M.dim());
    for (int c = 0; c < M.dim(); ++c) p[c] = stream.uniform(M.lo[c], M.hi[c]);
    x.points.push_back(std::move(p));
  }
  return x;
}

SublevelCurve estimate_sublevel(FiltrationKind kind, const Domain& M, int r, int dim_cap,
                                const std::vector<double>& t_grid, long n_samples,
                                std::uint64_t seed) {
  if (t_grid.empty()) throw ConfigError("estimate_sublevel: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0.0) throw ConfigError("estimate_sublevel: t grid must be positive");
    if (i > 0 && t_grid[i] <= t_grid[i - 1])
      throw ConfigError("estimate_sublevel: t grid must be increasing");
  }
  if (n_samples < 1000) throw ConfigError("estimate_sublevel: n_samples >= 1000 required");

  const double cap = filtration_cap(kind, M);
  std::vector<double> rho(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    RngStream stream(seed, "sublevel", static_cast<std::uint64_t>(i));
    PointCloud x = sample_uniform_cloud(M, r, stream);
    rho[i] = kind == FiltrationKind::VietorisRips ? rho_vr_gap(x, cap).value
                                                  : rho_lower(x, kind, dim_cap, cap).value;
  }
  std::sort(rho.begin(), rho.end());

  SublevelCurve curve;
  curve.t_grid = t_grid;
  curve.n_samples = n_samples;
  curve.kind = kind;
  curve.r = r;
  curve.d = M.dim();
  curve.p_hat.reserve(t_grid.size());
  curve.stderr_.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto cnt = std::upper_bound(rho.begin(), rho.end(), t) - rho.begin();
    const double p = static_cast<double>(cnt) / static_cast<double>(n_samples);
    curve.p_hat.push_back(p);
    curve.stderr_.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples)));
  }
  return curve;
}

AlphaFit fit_alpha(const SublevelCurve& curve, double t_lo, double t_hi) {
  std::vector<double> lt, lp;
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    const double t = curve.t_grid[i];
    const double p = curve.p_hat[i];
    if (t < t_lo || t > t_hi || p <= 0.0 || p >= 1.0) continue;
    lt.push_back(std::log(t));
    lp.push_back(std::log(p));
  }
  const int n = static_cast<int>(lt.size());
  if (n < 5) throw NumericError("fit_alpha: fewer than 5 usable grid points in window");

  double mt = 0.0, mp = 0.0;
  for (int i = 0; i < n; ++i) { mt += lt[i]; mp += lp[i]; }
  mt /= n;
  mp /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lt[i] - mt) * (lt[i] - mt);
    sxy += (lt[i] - mt) * (lp[i] - mp);
  }
  AlphaFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.intercept = mp - fit.alpha_hat * mt;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = lp[i] - (fit.intercept + fit.alpha_hat * lt[i]);
    rss += e * e;
  }
  fit.stderr_ = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  fit.n_points = n;
  return fit;
}

std::vector<double> default_t_grid(const Domain& M) {
  const double diam = M.diameter();
  const double lo = 1e-4 * diam;
  const double hi = 1e-1 * diam;
  const int per_decade = 24;
  const int n = static_cast<int>(std::round(per_decade * std::log10(hi / lo))) + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return grid;
}

}  // namespace topobreak
