#include <doctest.h>

#include <cmath>

#include "topobreak/geometry.hpp"
#include "topobreak/rng.hpp"
#include "topobreak/stability.hpp"

using namespace topobreak;

namespace {

PointCloud cloud(std::initializer_list<std::initializer_list<double>> pts) {
  PointCloud x;
  for (const auto& p : pts) {
    Eigen::VectorXd v(static_cast<int>(p.size()));
    int i = 0;
    for (double c : p) v[i++] = c;
    x.points.push_back(v);
  }
  return x;
}

Domain unit_square() {
  return Domain{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
}

}  // namespace

TEST_CASE("domain invariants") {
  Domain M = unit_square();
  CHECK(M.dim() == 2);
  CHECK(M.diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(M.contains(Eigen::Vector2d(0.5, 1.0)));
  CHECK_FALSE(M.contains(Eigen::Vector2d(0.5, 1.1)));
  CHECK(M.clip(Eigen::Vector2d(-1.0, 2.0)) == Eigen::Vector2d(0.0, 1.0));
  CHECK_THROWS_AS(Domain(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)), ConfigError);
  CHECK_THROWS_AS(Domain(Eigen::VectorXd(), Eigen::VectorXd()), ConfigError);
}

TEST_CASE("check_simplex rejects invalid index sets") {
  CHECK_THROWS_AS(check_simplex({}, 3), ConfigError);
  CHECK_THROWS_AS(check_simplex({0, 0}, 3), ConfigError);
  CHECK_THROWS_AS(check_simplex({1, 0}, 3), ConfigError);
  CHECK_THROWS_AS(check_simplex({0, 3}, 3), ConfigError);
  CHECK_NOTHROW(check_simplex({0, 2}, 3));
}

TEST_CASE("vr_value examples") {
  PointCloud x = cloud({{0, 0}, {3, 4}, {1, 0}, {0, 2}});
  CHECK(vr_value({0}, x) == 0.0);
  CHECK(vr_value({0, 1}, x) == doctest::Approx(5.0));
  PointCloud tri = cloud({{0, 0}, {1, 0}, {0, 2}});
  CHECK(vr_value({0, 1, 2}, tri) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(vr_value({0, 9}, x), ConfigError);
}

TEST_CASE("cech_value examples") {
  PointCloud seg = cloud({{0, 0}, {2, 0}});
  CHECK(cech_value({0, 1}, seg) == doctest::Approx(1.0));

  PointCloud eq = cloud({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}});
  CHECK(cech_value({0, 1, 2}, eq) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));

  PointCloud col = cloud({{0, 0}, {1, 0}, {2, 0}});
  CHECK(cech_value({0, 1, 2}, col) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(cech_value({0}, seg) == 0.0);
}

TEST_CASE("cech equals vr/2 on all 2-point sets") {
  RngStream stream(7, "geom2pt");
  Domain M = unit_square();
  for (int it = 0; it < 200; ++it) {
    PointCloud x = sample_uniform_cloud(M, 2, stream);
    CHECK(cech_value({0, 1}, x) == 0.5 * vr_value({0, 1}, x));
  }
}

TEST_CASE("filtration_cap examples") {
  Domain M2 = unit_square();
  CHECK(filtration_cap(FiltrationKind::VietorisRips, M2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(filtration_cap(FiltrationKind::Cech, M2) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0 / 6.0)));
  Eigen::VectorXd lo(1), hi(1);
  lo << 0.0;
  hi << 1.0;
  Domain M1{lo, hi};
  CHECK(filtration_cap(FiltrationKind::VietorisRips, M1) == doctest::Approx(1.0));
}

TEST_CASE("gradient_bound constants") {
  CHECK(gradient_bound(FiltrationKind::VietorisRips) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gradient_bound(FiltrationKind::Cech) == 1.0);
}

TEST_CASE("cech gradient norm bounded by 1 (finite differences)") {
  RngStream stream(11, "cechgrad");
  Domain M = unit_square();
  const double h = 1e-6;
  for (int it = 0; it < 50; ++it) {
    PointCloud x = sample_uniform_cloud(M, 3, stream);
    // Keep away from degenerate configurations where the value is non-smooth.
    const double base = cech_value({0, 1, 2}, x);
    if (base < 0.05) continue;
    double grad2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 2; ++c) {
        PointCloud xp = x, xm = x;
        xp.points[i][c] += h;
        xm.points[i][c] -= h;
        const double g = (cech_value({0, 1, 2}, xp) - cech_value({0, 1, 2}, xm)) / (2.0 * h);
        grad2 += g * g;
      }
    }
    CHECK(std::sqrt(grad2) <= 1.0 + 1e-4);
  }
}

TEST_CASE("permutation invariance of filtration values") {
  RngStream stream(13, "geomperm");
  Domain M = unit_square();
  for (int it = 0; it < 100; ++it) {
    PointCloud x = sample_uniform_cloud(M, 4, stream);
    PointCloud y;  // reversal permutation
    for (int i = 3; i >= 0; --i) y.points.push_back(x.points[i]);
    // J = {0,1,3} maps to {0,2,3} under reversal.
    CHECK(vr_value({0, 1, 3}, x) == vr_value({0, 2, 3}, y));
    CHECK(cech_value({0, 1, 3}, x) == cech_value({0, 2, 3}, y));
  }
}

TEST_CASE("monotonicity and cap bounds on random clouds") {
  RngStream stream(17, "geommono");
  Domain M = unit_square();
  const double capV = filtration_cap(FiltrationKind::VietorisRips, M);
  const double capC = filtration_cap(FiltrationKind::Cech, M);
  for (int it = 0; it < 2000; ++it) {
    PointCloud x = sample_uniform_cloud(M, 4, stream);
    const SimplexIndex inner{0, 2};
    const SimplexIndex outer{0, 1, 2, 3};
    CHECK(vr_value(inner, x) <= vr_value(outer, x));
    CHECK(cech_value(inner, x) <= cech_value(outer, x) + 1e-12);
    CHECK(vr_value(outer, x) >= 0.0);
    CHECK(vr_value(outer, x) <= capV + 1e-12);
    CHECK(cech_value(outer, x) <= capC + 1e-9);
  }
}

TEST_CASE("Lipschitz bound on random perturbations") {
  RngStream stream(19, "geomlip");
  Domain M = unit_square();
  for (int it = 0; it < 500; ++it) {
    PointCloud x = sample_uniform_cloud(M, 4, stream);
    PointCloud y = x;
    double sum2 = 0.0;
    for (auto& p : y.points) {
      Eigen::Vector2d d(stream.uniform(-1e-2, 1e-2), stream.uniform(-1e-2, 1e-2));
      p += d;
      sum2 += d.squaredNorm();
    }
    const double budget = std::sqrt(sum2);
    const SimplexIndex J{0, 1, 2, 3};
    CHECK(std::abs(vr_value(J, x) - vr_value(J, y)) <=
          gradient_bound(FiltrationKind::VietorisRips) * budget + 1e-12);
    CHECK(std::abs(cech_value(J, x) - cech_value(J, y)) <=
          gradient_bound(FiltrationKind::Cech) * budget + 1e-9);
  }
}

TEST_CASE("smallest enclosing ball degenerate inputs") {
  // Duplicated and affinely dependent points must not break the solver.
  PointCloud x = cloud({{0, 0}, {0, 0}, {1, 0}, {1, 0}});
  CHECK(cech_value({0, 1, 2, 3}, x) == doctest::Approx(0.5).epsilon(1e-9));
  Ball b = smallest_enclosing_ball(x.points);
  CHECK(b.radius == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.center[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(smallest_enclosing_ball({Eigen::Vector2d(2, 3)}).radius == 0.0);
}
