#pragma once

#include <vector>

#include "topobreak/geometry.hpp"
#include "topobreak/rng.hpp"

namespace topobreak {

struct RhoEstimate {
  enum class Kind { LowerBoundGeneric, ExactGapVR };
  double value = 0.0;
  Kind kind = Kind::LowerBoundGeneric;
};

struct SublevelCurve {
  std::vector<double> t_grid;
  std::vector<double> p_hat;
  std::vector<double> stderr_;
  long n_samples = 0;
  FiltrationKind kind = FiltrationKind::VietorisRips;
  int r = 0;
  int d = 0;
};

struct AlphaFit {
  double alpha_hat = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  int n_points = 0;
};

// Generic lower-bound proxy for rho: min gap between consecutive distinct
// filtration values (singletons excluded) divided by 2 c* sqrt(r). Capped at
// the filtration bound T of the bounding box of x when fewer than two
// distinct values exist.
RhoEstimate rho_lower(const PointCloud& x, FiltrationKind kind, int dim_cap, double cap);

// Sharp Vietoris-Rips proxy: min gap between consecutive distinct pairwise
// distances divided by 4.
RhoEstimate rho_vr_gap(const PointCloud& x, double cap);

SublevelCurve estimate_sublevel(FiltrationKind kind, const Domain& M, int r, int dim_cap,
                                const std::vector<double>& t_grid, long n_samples,
                                std::uint64_t seed);

// OLS of log p_hat on log t over [t_lo, t_hi]; only points with 0 < p < 1 are
// used and at least 5 are required.
AlphaFit fit_alpha(const SublevelCurve& curve, double t_lo, double t_hi);

// Default grid from the module defaults: 24 log-spaced points per decade over
// [1e-4, 1e-1] * diam(M).
std::vector<double> default_t_grid(const Domain& M);

PointCloud sample_uniform_cloud(const Domain& M, int r, RngStream& stream);

}  // namespace topobreak
