#pragma once

#include <Eigen/Dense>
#include <vector>

#include "topobreak/common.hpp"

namespace topobreak {

enum class FiltrationKind { VietorisRips, Cech };

// Compact box domain [lo, hi] in R^d.
struct Domain {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Domain() = default;
  Domain(Eigen::VectorXd l, Eigen::VectorXd h);

  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Eigen::VectorXd& x) const;
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const;
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
};

// Ordered cloud of exactly r points in R^d.
struct PointCloud {
  std::vector<Eigen::VectorXd> points;

  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

// Simplex as strictly increasing 0-based point indices.
using SimplexIndex = std::vector<int>;

struct Ball {
  Eigen::VectorXd center;
  double radius = -1.0;  // radius < 0 encodes the empty ball
};

// Smallest enclosing ball, Welzl recursion with a least-norm circumcenter
// solve for (possibly affinely dependent) support sets.
Ball smallest_enclosing_ball(const std::vector<Eigen::VectorXd>& pts);

// max pairwise distance; 0 for singletons
double vr_value(const SimplexIndex& J, const PointCloud& x);

// radius of the smallest ball enclosing x(J); 0 for singletons
double cech_value(const SimplexIndex& J, const PointCloud& x);

double filtration_value(FiltrationKind kind, const SimplexIndex& J, const PointCloud& x);

// Upper bound T on all filtration values over M^r. Vietoris-Rips: diam(M).
// Cech: Jung's bound diam(M) * sqrt(d / (2(d+1))).
double filtration_cap(FiltrationKind kind, const Domain& M);

// Essential-sup gradient norm c*: sqrt(2) for Vietoris-Rips, 1 for Cech.
double gradient_bound(FiltrationKind kind);

void check_simplex(const SimplexIndex& J, int r);

}  // namespace topobreak
