#include "topobreak/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace topobreak {

Domain::Domain(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() == 0 || lo.size() != hi.size())
    throw ConfigError("domain: lo and hi must be non-empty vectors of equal length");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw ConfigError("domain: lo[i] < hi[i] required");
}

bool Domain::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  for (int i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Eigen::VectorXd Domain::clip(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (int i = 0; i < lo.size(); ++i) y[i] = std::clamp(y[i], lo[i], hi[i]);
  return y;
}

void check_simplex(const SimplexIndex& J, int r) {
  if (J.empty()) throw ConfigError("simplex: empty index set");
  int prev = -1;
  for (int i : J) {
    if (i < 0 || i >= r) throw ConfigError("simplex: point index out of range");
    if (i <= prev) throw ConfigError("simplex: indices must be strictly increasing");
    prev = i;
  }
}

double vr_value(const SimplexIndex& J, const PointCloud& x) {
  check_simplex(J, x.size());
  double m = 0.0;
  for (std::size_t a = 0; a < J.size(); ++a)
    for (std::size_t b = a + 1; b < J.size(); ++b)
      m = std::max(m, (x.points[J[a]] - x.points[J[b]]).norm());
  return m;
}

namespace {

// Circumscribing ball of up to d+1 support points. Affinely dependent supports
// are handled by the least-norm solve; the pseudo-inverse threshold is 1e-12
// relative to the support-set diameter.
Ball circumball(const std::vector<Eigen::VectorXd>& b) {
  Ball out;
  if (b.empty()) return out;  // empty ball
  if (b.size() == 1) {
    out.center = b[0];
    out.radius = 0.0;
    return out;
  }
  const int d = static_cast<int>(b[0].size());
  const int k = static_cast<int>(b.size()) - 1;
  Eigen::MatrixXd Q(k, d);
  Eigen::VectorXd rhs(k);
  double diam = 0.0;
  for (std::size_t a = 0; a < b.size(); ++a)
    for (std::size_t c = a + 1; c < b.size(); ++c)
      diam = std::max(diam, (b[a] - b[c]).norm());
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd q = b[i + 1] - b[0];
    Q.row(i) = q.transpose();
    rhs[i] = 0.5 * q.squaredNorm();
  }
  // Least-norm c with Q c = rhs.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Q);
  cod.setThreshold(1e-12 * std::max(diam, 1.0));
  Eigen::VectorXd c = cod.solve(rhs);
  out.center = b[0] + c;
  double r2 = 0.0;
  for (const auto& p : b) r2 = std::max(r2, (p - out.center).norm());
  out.radius = r2;
  return out;
}

bool ball_contains(const Ball& B, const Eigen::VectorXd& p, double tol) {
  if (B.radius < 0.0) return false;
  return (p - B.center).norm() <= B.radius + tol;
}

Ball welzl(std::vector<Eigen::VectorXd>& pts, std::size_t n,
           std::vector<Eigen::VectorXd>& boundary, int d, double tol) {
  if (n == 0 || static_cast<int>(boundary.size()) == d + 1) return circumball(boundary);
  Eigen::VectorXd p = pts[n - 1];
  Ball B = welzl(pts, n - 1, boundary, d, tol);
  if (ball_contains(B, p, tol)) return B;
  boundary.push_back(p);
  Ball B2 = welzl(pts, n - 1, boundary, d, tol);
  boundary.pop_back();
  return B2;
}

}  // namespace

Ball smallest_enclosing_ball(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.empty()) return Ball{};
  double scale = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      scale = std::max(scale, (pts[a] - pts[b]).norm());
  const double tol = 1e-12 * std::max(scale, 1.0);
  // When some two-point diameter ball already encloses the set, return it with
  // the radius written exactly as the half pairwise distance. Ties between a
  // simplex value and its longest edge are then reproduced bit-for-bit, which
  // keeps analytically persistent value classes intact under perturbation.
  {
    Ball best;
    for (std::size_t a = 0; a < pts.size(); ++a) {
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const double radius = 0.5 * (pts[a] - pts[b]).norm();
        if (best.radius >= 0.0 && radius >= best.radius) continue;
        const Eigen::VectorXd center = 0.5 * (pts[a] + pts[b]);
        bool ok = true;
        for (const auto& p : pts)
          if ((p - center).norm() > radius + tol) { ok = false; break; }
        if (ok) best = Ball{center, radius};
      }
    }
    if (best.radius >= 0.0) return best;
  }
  std::vector<Eigen::VectorXd> work = pts;
  // Canonical processing order makes the result exactly invariant under input
  // permutation (the recursion order would otherwise leak into the last bits).
  std::sort(work.begin(), work.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  });
  std::vector<Eigen::VectorXd> boundary;
  Ball B = welzl(work, work.size(), boundary, static_cast<int>(pts[0].size()), tol);
  if (B.radius < 0.0) throw NumericError("smallest_enclosing_ball: solver failed");
  return B;
}

double cech_value(const SimplexIndex& J, const PointCloud& x) {
  check_simplex(J, x.size());
  if (J.size() == 1) return 0.0;
  if (J.size() == 2) return 0.5 * (x.points[J[0]] - x.points[J[1]]).norm();
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(J.size());
  for (int i : J) pts.push_back(x.points[i]);
  return smallest_enclosing_ball(pts).radius;
}

double filtration_value(FiltrationKind kind, const SimplexIndex& J, const PointCloud& x) {
  return kind == FiltrationKind::VietorisRips ? vr_value(J, x) : cech_value(J, x);
}

double filtration_cap(FiltrationKind kind, const Domain& M) {
  const double diam = M.diameter();
  if (kind == FiltrationKind::VietorisRips) return diam;
  const double d = static_cast<double>(M.dim());
  return diam * std::sqrt(d / (2.0 * (d + 1.0)));
}

double gradient_bound(FiltrationKind kind) {
  return kind == FiltrationKind::VietorisRips ? std::sqrt(2.0) : 1.0;
}

}  // namespace topobreak
