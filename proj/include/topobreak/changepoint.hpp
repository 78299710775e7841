#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "topobreak/common.hpp"
#include "topobreak/rng.hpp"

namespace topobreak {

enum class Statistic { Lambda, Omega };

// n observations of an ell-dimensional statistic series, one row per time.
struct StatSeries {
  Eigen::MatrixXd values;  // n x ell
  int n() const { return static_cast<int>(values.rows()); }
  int ell() const { return static_cast<int>(values.cols()); }
};

struct CusumSeries {
  Eigen::MatrixXd S;  // n x ell; S_n = 0 by construction
};

struct LrcEstimate {
  Eigen::MatrixXd gamma_hat;  // symmetric ell x ell
  int bandwidth = 0;
  double ridge = 0.0;         // ridge actually applied before inversion
  bool ridge_applied = false;
};

struct QuantileTable {
  Statistic statistic = Statistic::Lambda;
  int ell = 0;
  int grid = 0;
  long n_rep = 0;
  std::uint64_t seed = 0;
  std::vector<double> levels;     // 0.90, 0.95, 0.99
  std::vector<double> quantiles;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> samples;    // sorted; used for p-values
  double quantile(double level) const;
  double p_value(double observed) const;
};

enum class CvMethod { SimulatedQuantile, NormalApprox };

struct CvSettings {
  CvMethod method = CvMethod::SimulatedQuantile;
  int grid = 4096;
  long n_rep = 20000;
  std::uint64_t seed = 0x746f706f62726bULL;
};

struct TestResult {
  Statistic statistic = Statistic::Lambda;
  double value = 0.0;
  int ell = 0;
  double critical_value = 0.0;
  double p_value = 0.0;
  bool reject = false;
  CvMethod method = CvMethod::SimulatedQuantile;
  int bandwidth = 0;
  bool ridge_applied = false;
};

enum class CpWeighting { InverseLrc, Identity };

struct ChangePointEstimate {
  long v_hat = 0;          // 1-based, smallest maximizing index
  double theta_hat = 0.0;  // v_hat / n
  double objective = 0.0;
};

CusumSeries cusum(const StatSeries& series);

// Bartlett-kernel long-run covariance of the demeaned series,
// Gamma_hat = sum_{|h| <= b} (1 - |h|/b) C_hat(h); bandwidth -1 selects
// floor(n^{1/3}). Ridge 1e-8 trace/ell is applied when the condition number
// exceeds 1e10.
LrcEstimate long_run_cov(const StatSeries& series, int bandwidth = -1);

double lambda_stat(const CusumSeries& S, const LrcEstimate& lrc);
double omega_stat(const CusumSeries& S, const LrcEstimate& lrc);

// Monte Carlo for sup / integral of the squared norm of ell independent
// standard Brownian bridges on a uniform grid.
QuantileTable simulate_limit_law(Statistic statistic, int ell, int grid, long n_rep,
                                 std::uint64_t seed);

// Cached variant keyed by (statistic, ell, grid, n_rep, seed).
const QuantileTable& simulate_limit_law_cached(Statistic statistic, int ell, int grid,
                                               long n_rep, std::uint64_t seed);

// One bridge-statistic draw from pre-drawn standard normal increments
// (ell * grid of them, coordinate-major). stride > 1 evaluates the same paths
// on a coarser grid, which isolates discretization bias from Monte Carlo
// noise.
double bridge_statistic_from_increments(Statistic statistic, int ell, int grid,
                                        const std::vector<double>& z, int stride = 1);

// ell/4 + z * sqrt(ell/8) for Lambda, ell/6 + z * sqrt(ell/45) for Omega.
double normal_approx_cv(Statistic statistic, int ell, double level);

double normal_quantile(double level);

TestResult run_test(const StatSeries& series, Statistic statistic, double level,
                    const CvSettings& cv, int bandwidth = -1);

ChangePointEstimate estimate_changepoint(const StatSeries& series,
                                         CpWeighting weighting = CpWeighting::InverseLrc,
                                         int bandwidth = -1);

// Piecewise-linear H1 drift S*(t) for the mean-shift model.
Eigen::VectorXd theoretical_drift(double theta, const Eigen::VectorXd& delta_mean, double t);

}  // namespace topobreak
