#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "topobreak/geometry.hpp"
#include "topobreak/rng.hpp"

namespace topobreak {

struct Simplex {
  SimplexIndex members;
  int dim = 0;  // |members| - 1
  double value = 0.0;
};

// All simplices on [r] up to dim_cap, sorted by (value asc, dim asc, lex asc),
// together with the partition into classes of equal filtration value.
struct FilteredComplex {
  int r = 0;
  int dim_cap = 0;
  FiltrationKind kind = FiltrationKind::VietorisRips;
  std::vector<Simplex> simplices;
  std::vector<double> distinct_values;      // u_1 < ... < u_L
  std::vector<std::size_t> class_of;        // simplex index -> class index
};

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  bool essential = false;
  bool trivial = false;  // diagonal padding entry
};

struct PersistenceDiagram {
  int k = 0;
  std::vector<PersistencePair> pairs;
};

// Interleaved (death_1, birth_1, ..., death_Nk, birth_Nk) layout.
struct FeatureVector {
  Eigen::VectorXd z;
  int n_pairs() const { return static_cast<int>(z.size()) / 2; }
  double death(int i) const { return z[2 * i]; }
  double birth(int i) const { return z[2 * i + 1]; }
};

enum class TieBreak { Deterministic, SeededRandom };

struct FeatureComponent {
  enum class Kind { TotalPersistence, MaxPersistence, MeanBirth, MeanDeath };
  Kind kind = Kind::TotalPersistence;
  double gamma = 1.0;  // only for TotalPersistence; may be +infinity
};

using FeatureMapSpec = std::vector<FeatureComponent>;

// C(r, k+1) + C(r, k+2), the deterministic bound on the number of k-features.
std::int64_t n_features(int r, int k);

FilteredComplex build_filtration(const PointCloud& x, FiltrationKind kind, int dim_cap);

// Dimension-k pairs with death > birth plus essential classes with death = T,
// ordered by (birth asc, death asc). Not yet padded.
PersistenceDiagram compute_persistence(const FilteredComplex& c, int k, double T);

// All diagrams 0..dim_cap-1 in one reduction pass.
std::vector<PersistenceDiagram> compute_all_persistence(const FilteredComplex& c, double T);

PersistenceDiagram pad_diagram(PersistenceDiagram pd, std::int64_t n_k);

FeatureVector feature_vector(const PersistenceDiagram& pd, TieBreak policy,
                             RngStream* stream = nullptr);

double total_persistence(const FeatureVector& z, double gamma);

Eigen::VectorXd feature_map(const FeatureVector& z, const FeatureMapSpec& spec);

}  // namespace topobreak
