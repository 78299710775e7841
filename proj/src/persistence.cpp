#include "topobreak/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace topobreak {

namespace {

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t res = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) res = res * (n - k + i) / i;
  return res;
}

std::uint64_t mask_of(const SimplexIndex& J) {
  std::uint64_t m = 0;
  for (int i : J) m |= (1ULL << i);
  return m;
}

bool lex_less(const SimplexIndex& a, const SimplexIndex& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// XOR of two sorted index lists (mod-2 column addition).
std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) out.push_back(a[i++]);
    else if (b[j] < a[i]) out.push_back(b[j++]);
    else { ++i; ++j; }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  return out;
}

}  // namespace

std::int64_t n_features(int r, int k) { return binom(r, k + 1) + binom(r, k + 2); }

FilteredComplex build_filtration(const PointCloud& x, FiltrationKind kind, int dim_cap) {
  const int r = x.size();
  if (r < 2) throw ConfigError("build_filtration: point cloud needs r >= 2");
  if (dim_cap < 1 || dim_cap > r - 1)
    throw ConfigError("build_filtration: dim_cap must be in [1, r-1]");

  FilteredComplex c;
  c.r = r;
  c.dim_cap = dim_cap;
  c.kind = kind;

  // Pairwise distances drive the Vietoris-Rips values and the 2-point Cech
  // fast path.
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      dist(i, j) = dist(j, i) = (x.points[i] - x.points[j]).norm();

  SimplexIndex J;
  auto value_of = [&](const SimplexIndex& s) -> double {
    if (s.size() == 1) return 0.0;
    if (kind == FiltrationKind::VietorisRips || s.size() == 2) {
      double m = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
          m = std::max(m, dist(s[a], s[b]));
      return kind == FiltrationKind::VietorisRips ? m : 0.5 * m;
    }
    return cech_value(s, x);
  };
  // Enumerate all subsets of [r] with 1 <= size <= dim_cap + 1.
  auto emit = [&](auto&& self, int next) -> void {
    if (!J.empty()) {
      Simplex s;
      s.members = J;
      s.dim = static_cast<int>(J.size()) - 1;
      s.value = value_of(J);
      c.simplices.push_back(std::move(s));
    }
    if (static_cast<int>(J.size()) == dim_cap + 1) return;
    for (int i = next; i < r; ++i) {
      J.push_back(i);
      self(self, i + 1);
      J.pop_back();
    }
  };
  emit(emit, 0);

  std::sort(c.simplices.begin(), c.simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return lex_less(a.members, b.members);
  });

  // Value classes with exact equality on represented reals.
  c.class_of.resize(c.simplices.size());
  for (std::size_t i = 0; i < c.simplices.size(); ++i) {
    if (i == 0 || c.simplices[i].value != c.distinct_values.back())
      c.distinct_values.push_back(c.simplices[i].value);
    c.class_of[i] = c.distinct_values.size() - 1;
  }
  return c;
}

std::vector<PersistenceDiagram> compute_all_persistence(const FilteredComplex& c, double T) {
  const std::size_t m = c.simplices.size();
  for (const auto& s : c.simplices)
    if (s.value > T) throw ConfigError("compute_persistence: T below max filtration value");

  std::unordered_map<std::uint64_t, int> index_of;
  index_of.reserve(m * 2);
  for (std::size_t i = 0; i < m; ++i) index_of[mask_of(c.simplices[i].members)] = static_cast<int>(i);

  std::vector<char> cleared(m, 0);
  std::vector<char> reduced_empty(m, 0);
  std::vector<int> pivot_col(m, -1);                   // row -> owning column
  std::vector<std::vector<int>> reduced(m);            // stored reduced columns
  std::vector<std::pair<int, int>> index_pairs;        // (birth simplex, death simplex)

  auto boundary = [&](const Simplex& s) {
    std::vector<int> col;
    col.reserve(s.members.size());
    SimplexIndex face;
    for (std::size_t drop = 0; drop < s.members.size(); ++drop) {
      face.clear();
      for (std::size_t i = 0; i < s.members.size(); ++i)
        if (i != drop) face.push_back(s.members[i]);
      col.push_back(index_of.at(mask_of(face)));
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  // Column reduction with the twist (clearing) optimization: highest dimension
  // first, pivot rows of found pairs are cleared and never reduced.
  for (int q = c.dim_cap; q >= 1; --q) {
    for (std::size_t j = 0; j < m; ++j) {
      if (c.simplices[j].dim != q || cleared[j]) continue;
      std::vector<int> col = boundary(c.simplices[j]);
      while (!col.empty()) {
        int low = col.back();
        int owner = pivot_col[low];
        if (owner < 0) break;
        col = sym_diff(col, reduced[owner]);
      }
      if (!col.empty()) {
        int low = col.back();
        pivot_col[low] = static_cast<int>(j);
        reduced[j] = std::move(col);
        index_pairs.emplace_back(low, static_cast<int>(j));
        cleared[low] = 1;
      } else {
        reduced_empty[j] = 1;
      }
    }
  }

  std::vector<PersistenceDiagram> out(c.dim_cap);
  for (int k = 0; k < c.dim_cap; ++k) out[k].k = k;

  for (auto [bi, di] : index_pairs) {
    const int k = c.simplices[bi].dim;
    const double birth = c.simplices[bi].value;
    const double death = c.simplices[di].value;
    if (death <= birth || k >= c.dim_cap) continue;
    out[k].pairs.push_back({birth, death, k, false, false});
  }
  // Essential classes: creators that never became a pivot row.
  for (std::size_t i = 0; i < m; ++i) {
    const int k = c.simplices[i].dim;
    if (k >= c.dim_cap || cleared[i]) continue;
    const bool creator = (k == 0) || reduced_empty[i];
    if (creator) out[k].pairs.push_back({c.simplices[i].value, T, k, true, false});
  }
  for (auto& pd : out) {
    std::sort(pd.pairs.begin(), pd.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
      if (a.birth != b.birth) return a.birth < b.birth;
      return a.death < b.death;
    });
  }
  return out;
}

PersistenceDiagram compute_persistence(const FilteredComplex& c, int k, double T) {
  if (k < 0 || k > c.dim_cap - 1)
    throw ConfigError("compute_persistence: need 0 <= k <= dim_cap - 1");
  return compute_all_persistence(c, T)[k];
}

PersistenceDiagram pad_diagram(PersistenceDiagram pd, std::int64_t n_k) {
  if (static_cast<std::int64_t>(pd.pairs.size()) > n_k)
    throw NumericError("pad_diagram: diagram exceeds the deterministic bound N_k");
  while (static_cast<std::int64_t>(pd.pairs.size()) < n_k)
    pd.pairs.push_back({0.0, 0.0, pd.k, false, true});
  return pd;
}

FeatureVector feature_vector(const PersistenceDiagram& pd, TieBreak policy, RngStream* stream) {
  const std::size_t n = pd.pairs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  if (policy == TieBreak::SeededRandom) {
    if (stream == nullptr) throw ConfigError("feature_vector: SeededRandom needs a stream");
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = stream->uniform();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (pd.pairs[a].birth != pd.pairs[b].birth) return pd.pairs[a].birth < pd.pairs[b].birth;
      return key[a] < key[b];
    });
  } else {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = pd.pairs[a];
      const auto& pb = pd.pairs[b];
      if (pa.birth != pb.birth) return pa.birth < pb.birth;
      if (pa.death != pb.death) return pa.death < pb.death;
      return pa.trivial > pb.trivial;  // pads first within equal (birth, death)
    });
  }

  FeatureVector fv;
  fv.z.resize(2 * static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    fv.z[2 * i] = pd.pairs[order[i]].death;
    fv.z[2 * i + 1] = pd.pairs[order[i]].birth;
  }
  return fv;
}

double total_persistence(const FeatureVector& z, double gamma) {
  if (!(gamma >= 1.0)) throw ConfigError("total_persistence: gamma >= 1 required");
  const int n = z.n_pairs();
  if (std::isinf(gamma)) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(z.death(i) - z.birth(i)));
    return m;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(z.death(i) - z.birth(i), gamma);
  return std::pow(s, 1.0 / gamma);
}

// Lipschitz constants of the components on R^{2 N_k}:
//   TotalPersistence(gamma): sqrt(2) * N_k^{1/gamma'} with 1/gamma + 1/gamma' = 1
//   MaxPersistence: sqrt(2)
//   MeanBirth, MeanDeath: N_k^{-1/2}
Eigen::VectorXd feature_map(const FeatureVector& z, const FeatureMapSpec& spec) {
  if (spec.empty()) throw ConfigError("feature_map: at least one component required");
  const int n = z.n_pairs();
  Eigen::VectorXd out(spec.size());
  for (std::size_t c = 0; c < spec.size(); ++c) {
    switch (spec[c].kind) {
      case FeatureComponent::Kind::TotalPersistence:
        out[c] = total_persistence(z, spec[c].gamma);
        break;
      case FeatureComponent::Kind::MaxPersistence:
        out[c] = total_persistence(z, std::numeric_limits<double>::infinity());
        break;
      case FeatureComponent::Kind::MeanBirth: {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += z.birth(i);
        out[c] = n > 0 ? s / n : 0.0;
        break;
      }
      case FeatureComponent::Kind::MeanDeath: {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += z.death(i);
        out[c] = n > 0 ? s / n : 0.0;
        break;
      }
      default:
        throw ConfigError("feature_map: unknown component");
    }
  }
  return out;
}

}  // namespace topobreak
