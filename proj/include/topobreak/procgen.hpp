#pragma once

#include <optional>
#include <vector>

#include "topobreak/geometry.hpp"
#include "topobreak/rng.hpp"

namespace topobreak {

struct InnovationSpec {
  enum class Dist { UniformBox, TruncatedGaussian };
  Dist dist = Dist::UniformBox;
  Eigen::VectorXd lo;    // UniformBox corners / truncation box
  Eigen::VectorXd hi;
  Eigen::VectorXd mean;  // TruncatedGaussian only
  double sd = 1.0;
  int dim() const { return static_cast<int>(lo.size()); }
};

// Diagonal coefficient matrices a_k = scale * (k+1)^(-beta) * I, truncated at
// lag K.
struct LinearProcessSpec {
  double decay_exponent = 3.0;  // beta > 1
  double scale = 1.0;
  int truncation_lag = 10;      // K >= 1
  double coefficient(int k) const;
};

struct CloudSeriesSpec {
  enum class Generator { IidClouds, DelayEmbedding };
  Generator generator = Generator::IidClouds;
  int n = 0;
  int r = 0;
  Domain M;
  InnovationSpec innovation;
  LinearProcessSpec linear;  // DelayEmbedding only
  void validate() const;
};

struct BreakSpec {
  enum class Kind { MeanShift, ScaleChange };
  Kind kind = Kind::MeanShift;
  double theta = 0.5;            // in (0, 1)
  Eigen::VectorXd shift;         // MeanShift: applied to every point
  double factor = 1.0;           // ScaleChange: scaling about the box center
};

struct ApproxProfile {
  std::vector<int> m_list;
  std::vector<double> nu_hat;            // max_i E[||X_0i - X_0i^(m)||^p]^(1/p)
  std::vector<double> stderr_;           // delta-method standard error of nu_hat
  std::vector<double> weighted_partial;  // sum_{m'<=m} m'^((1+delta)p/alpha) nu_hat_{m'}
  double p = 2.0;
  double delta = 0.1;
  double alpha = 1.0;
};

std::vector<PointCloud> gen_series(const CloudSeriesSpec& spec, std::uint64_t seed);

std::vector<std::pair<PointCloud, PointCloud>> gen_m_coupled(const CloudSeriesSpec& spec,
                                                             int m, std::uint64_t seed);

ApproxProfile approx_profile(const CloudSeriesSpec& spec, double p,
                             const std::vector<int>& m_list, long n_mc, double delta,
                             double alpha, std::uint64_t seed);

std::vector<PointCloud> inject_break(const CloudSeriesSpec& spec, const BreakSpec& brk,
                                     std::uint64_t seed);

void validate_break(const CloudSeriesSpec& spec, const BreakSpec& brk);

}  // namespace topobreak
