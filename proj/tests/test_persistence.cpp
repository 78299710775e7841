#include <doctest.h>

#include <cmath>

#include "oracle_naive_persistence.hpp"
#include "topobreak/persistence.hpp"
#include "topobreak/stability.hpp"

using namespace topobreak;

namespace {

PointCloud square_corners() {
  PointCloud x;
  x.points = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1),
              Eigen::Vector2d(0, 1)};
  return x;
}

PointCloud line_cloud() {
  PointCloud x;
  Eigen::VectorXd a(1), b(1), c(1);
  a << 0.0;
  b << 1.0;
  c << 3.0;
  x.points = {a, b, c};
  return x;
}

bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.k != b.k || a.pairs.size() != b.pairs.size()) return false;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].birth != b.pairs[i].birth || a.pairs[i].death != b.pairs[i].death ||
        a.pairs[i].essential != b.pairs[i].essential)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("n_features formula") {
  CHECK(n_features(4, 0) == 10);  // C(4,1) + C(4,2)
  CHECK(n_features(5, 1) == 20);  // C(5,2) + C(5,3)
  CHECK(n_features(6, 0) == 21);
  CHECK(n_features(3, 1) == 4);
}

TEST_CASE("build_filtration structure") {
  PointCloud x = line_cloud();
  FilteredComplex c = build_filtration(x, FiltrationKind::VietorisRips, 2);
  CHECK(c.simplices.size() == 7);  // 3 vertices, 3 edges, 1 triangle

  // Vertices all at 0, edges at the pairwise distances, triangle at the max.
  std::vector<double> edge_vals;
  for (const auto& s : c.simplices) {
    if (s.dim == 0) CHECK(s.value == 0.0);
    if (s.dim == 1) edge_vals.push_back(s.value);
    if (s.dim == 2) CHECK(s.value == 3.0);
  }
  std::sort(edge_vals.begin(), edge_vals.end());
  CHECK(edge_vals == std::vector<double>{1.0, 2.0, 3.0});

  // Sorted by (value, dim, lex); faces never after cofaces; value classes.
  for (std::size_t i = 1; i < c.simplices.size(); ++i) {
    const auto& a = c.simplices[i - 1];
    const auto& b = c.simplices[i];
    CHECK((a.value < b.value || (a.value == b.value && a.dim <= b.dim)));
  }
  CHECK(c.distinct_values.size() == 4);  // 0, 1, 2, 3
  for (std::size_t i = 1; i < c.distinct_values.size(); ++i)
    CHECK(c.distinct_values[i - 1] < c.distinct_values[i]);
  for (std::size_t i = 0; i < c.simplices.size(); ++i)
    CHECK(c.distinct_values[c.class_of[i]] == c.simplices[i].value);

  CHECK_THROWS_AS(build_filtration(x, FiltrationKind::VietorisRips, 0), ConfigError);
  CHECK_THROWS_AS(build_filtration(x, FiltrationKind::VietorisRips, 3), ConfigError);
}

TEST_CASE("unit-square fixture: H0 and H1 diagrams") {
  PointCloud x = square_corners();
  const double T = 2.0;
  FilteredComplex c = build_filtration(x, FiltrationKind::VietorisRips, 2);

  PersistenceDiagram h0 = compute_persistence(c, 0, T);
  REQUIRE(h0.pairs.size() == 4);
  int essential = 0;
  for (const auto& p : h0.pairs) {
    CHECK(p.birth == 0.0);
    if (p.essential) {
      ++essential;
      CHECK(p.death == T);
    } else {
      CHECK(p.death == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(essential == 1);

  PersistenceDiagram h1 = compute_persistence(c, 1, T);
  REQUIRE(h1.pairs.size() == 1);
  CHECK(h1.pairs[0].birth == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h1.pairs[0].death == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK_FALSE(h1.pairs[0].essential);
}

TEST_CASE("three points carry no persistent 1-cycle") {
  PointCloud x = line_cloud();
  FilteredComplex c = build_filtration(x, FiltrationKind::VietorisRips, 2);
  PersistenceDiagram h1 = compute_persistence(c, 1, 3.0);
  CHECK(h1.pairs.empty());
}

TEST_CASE("compute_persistence input validation") {
  FilteredComplex c = build_filtration(square_corners(), FiltrationKind::VietorisRips, 2);
  CHECK_THROWS_AS(compute_persistence(c, 2, 2.0), ConfigError);
  CHECK_THROWS_AS(compute_persistence(c, -1, 2.0), ConfigError);
  CHECK_THROWS_AS(compute_persistence(c, 0, 0.5), ConfigError);  // T below max value
}

TEST_CASE("optimized reducer matches the naive oracle") {
  RngStream stream(23, "orcl");
  Domain M{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  for (int it = 0; it < 200; ++it) {
    const int r = 3 + static_cast<int>(stream.uniform() * 3);  // 3..5
    PointCloud x = sample_uniform_cloud(M, r, stream);
    for (FiltrationKind kind : {FiltrationKind::VietorisRips, FiltrationKind::Cech}) {
      const int dim_cap = std::min(2, r - 1);
      FilteredComplex c = build_filtration(x, kind, dim_cap);
      const double T = 10.0;
      auto fast = compute_all_persistence(c, T);
      auto slow = testing::naive_persistence(c, T);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t k = 0; k < fast.size(); ++k) {
        CAPTURE(it);
        CAPTURE(k);
        CHECK(diagrams_equal(fast[k], slow[k]));
      }
    }
  }
}

TEST_CASE("diagram count bound on random clouds") {
  RngStream stream(29, "count");
  Domain M{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  for (int it = 0; it < 2000; ++it) {
    PointCloud x = sample_uniform_cloud(M, 5, stream);
    FilteredComplex c = build_filtration(x, FiltrationKind::VietorisRips, 2);
    auto pds = compute_all_persistence(c, 2.0);
    for (int k = 0; k < 2; ++k)
      CHECK(static_cast<std::int64_t>(pds[k].pairs.size()) <= n_features(5, k));
  }
}

TEST_CASE("pad_diagram") {
  PersistenceDiagram pd;
  pd.k = 0;
  pd.pairs = {{0.0, 1.0, 0, false, false}, {0.0, 2.0, 0, true, false},
              {0.0, 0.5, 0, false, false}};
  PersistenceDiagram padded = pad_diagram(pd, 10);
  CHECK(padded.pairs.size() == 10);
  for (std::size_t i = 3; i < 10; ++i) {
    CHECK(padded.pairs[i].trivial);
    CHECK(padded.pairs[i].birth == 0.0);
    CHECK(padded.pairs[i].death == 0.0);
  }
  // Idempotence.
  PersistenceDiagram again = pad_diagram(padded, 10);
  CHECK(again.pairs.size() == 10);
  CHECK_THROWS_AS(pad_diagram(padded, 2), NumericError);
}

TEST_CASE("feature_vector layout and deterministic tie-break") {
  PersistenceDiagram pd;
  pd.k = 0;
  pd.pairs = {{0.2, 0.7, 0, false, false}};
  FeatureVector z = feature_vector(pd, TieBreak::Deterministic);
  REQUIRE(z.z.size() == 2);
  CHECK(z.z[0] == 0.7);
  CHECK(z.z[1] == 0.2);

  PersistenceDiagram pd2;
  pd2.k = 0;
  pd2.pairs = {{0.0, 1.0, 0, false, false}, {0.0, 2.0, 0, true, false},
               {0.0, 1.0, 0, false, false}};
  pd2 = pad_diagram(pd2, 5);
  FeatureVector z2 = feature_vector(pd2, TieBreak::Deterministic);
  // All births 0; pads (death 0) come first, then (0,1),(0,1),(0,2).
  CHECK(z2.death(0) == 0.0);
  CHECK(z2.death(1) == 0.0);
  CHECK(z2.death(2) == 1.0);
  CHECK(z2.death(3) == 1.0);
  CHECK(z2.death(4) == 2.0);
  for (int i = 1; i < z2.n_pairs(); ++i) CHECK(z2.birth(i - 1) <= z2.birth(i));

  CHECK_THROWS_AS(feature_vector(pd2, TieBreak::SeededRandom, nullptr), ConfigError);
  RngStream s(1, "tie");
  FeatureVector zr = feature_vector(pd2, TieBreak::SeededRandom, &s);
  for (int i = 1; i < zr.n_pairs(); ++i) CHECK(zr.birth(i - 1) <= zr.birth(i));
}

TEST_CASE("feature_vector invariant under point relabeling") {
  RngStream stream(31, "perm");
  Domain M{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  for (int it = 0; it < 50; ++it) {
    PointCloud x = sample_uniform_cloud(M, 5, stream);
    PointCloud y;
    for (int i = 4; i >= 0; --i) y.points.push_back(x.points[i]);
    for (int k = 0; k < 2; ++k) {
      auto zx = feature_vector(
          pad_diagram(compute_persistence(build_filtration(x, FiltrationKind::VietorisRips, 2),
                                          k, 2.0),
                      n_features(5, k)),
          TieBreak::Deterministic);
      auto zy = feature_vector(
          pad_diagram(compute_persistence(build_filtration(y, FiltrationKind::VietorisRips, 2),
                                          k, 2.0),
                      n_features(5, k)),
          TieBreak::Deterministic);
      CHECK(zx.z == zy.z);
    }
  }
}

TEST_CASE("total_persistence") {
  PersistenceDiagram pd;
  pd.k = 1;
  pd.pairs = {{1.0, std::sqrt(2.0), 1, false, false}};
  pd = pad_diagram(pd, 14);
  FeatureVector z = feature_vector(pd, TieBreak::Deterministic);
  CHECK(total_persistence(z, 1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(total_persistence(z, 2.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

  PersistenceDiagram pd2;
  pd2.k = 0;
  pd2.pairs = {{0.0, 1.0, 0, false, false}, {0.0, 3.0, 0, false, false}};
  FeatureVector z2 = feature_vector(pd2, TieBreak::Deterministic);
  CHECK(total_persistence(z2, std::numeric_limits<double>::infinity()) == 3.0);

  PersistenceDiagram trivial;
  trivial.k = 0;
  trivial = pad_diagram(trivial, 4);
  FeatureVector zt = feature_vector(trivial, TieBreak::Deterministic);
  CHECK(total_persistence(zt, 1.0) == 0.0);
  CHECK(total_persistence(zt, std::numeric_limits<double>::infinity()) == 0.0);

  CHECK_THROWS_AS(total_persistence(z2, 0.5), ConfigError);
}

TEST_CASE("feature_map") {
  PersistenceDiagram pd;
  pd.k = 1;
  pd.pairs = {{1.0, std::sqrt(2.0), 1, false, false}};
  pd = pad_diagram(pd, 14);
  FeatureVector z = feature_vector(pd, TieBreak::Deterministic);
  FeatureMapSpec spec{
      {FeatureComponent::Kind::TotalPersistence, 1.0},
      {FeatureComponent::Kind::TotalPersistence, std::numeric_limits<double>::infinity()}};
  Eigen::VectorXd out = feature_map(z, spec);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

  PersistenceDiagram trivial;
  trivial.k = 0;
  trivial = pad_diagram(trivial, 4);
  FeatureVector zt = feature_vector(trivial, TieBreak::Deterministic);
  Eigen::VectorXd mb = feature_map(zt, {{FeatureComponent::Kind::MeanBirth, 1.0}});
  CHECK(mb[0] == 0.0);

  CHECK_THROWS_AS(feature_map(z, FeatureMapSpec{}), ConfigError);
}

TEST_CASE("H0 births are exactly zero on random clouds") {
  RngStream stream(37, "h0birth");
  Domain M{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  for (int it = 0; it < 100; ++it) {
    PointCloud x = sample_uniform_cloud(M, 4, stream);
    for (FiltrationKind kind : {FiltrationKind::VietorisRips, FiltrationKind::Cech}) {
      FilteredComplex c = build_filtration(x, kind, 2);
      for (const auto& p : compute_persistence(c, 0, 2.0).pairs) CHECK(p.birth == 0.0);
    }
  }
}
