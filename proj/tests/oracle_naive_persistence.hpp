// Test-only persistence oracle: plain left-to-right column reduction over the
// two-element field, with no clearing or twist optimizations. Used to
// cross-check the optimized reducer on small inputs.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "topobreak/persistence.hpp"

namespace topobreak::testing {

inline std::vector<PersistenceDiagram> naive_persistence(const FilteredComplex& c, double T) {
  const std::size_t m = c.simplices.size();
  std::map<std::vector<int>, int> index_of;
  for (std::size_t i = 0; i < m; ++i) index_of[c.simplices[i].members] = static_cast<int>(i);

  std::vector<std::vector<int>> reduced(m);
  std::vector<int> pivot_col(m, -1);
  std::vector<char> is_creator(m, 0), is_killed(m, 0);

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<int> col;
    const auto& mem = c.simplices[j].members;
    if (mem.size() > 1) {
      for (std::size_t drop = 0; drop < mem.size(); ++drop) {
        std::vector<int> face;
        for (std::size_t i = 0; i < mem.size(); ++i)
          if (i != drop) face.push_back(mem[i]);
        col.push_back(index_of.at(face));
      }
      std::sort(col.begin(), col.end());
    }
    while (!col.empty() && pivot_col[col.back()] >= 0) {
      const std::vector<int>& other = reduced[pivot_col[col.back()]];
      std::vector<int> merged;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(merged));
      col = std::move(merged);
    }
    if (col.empty()) {
      is_creator[j] = 1;
    } else {
      pivot_col[col.back()] = static_cast<int>(j);
      is_killed[col.back()] = 1;
      reduced[j] = std::move(col);
    }
  }

  std::vector<PersistenceDiagram> out(c.dim_cap);
  for (int k = 0; k < c.dim_cap; ++k) out[k].k = k;
  for (std::size_t j = 0; j < m; ++j) {
    if (!reduced[j].empty()) {
      const int bi = reduced[j].back();
      const int k = c.simplices[bi].dim;
      const double birth = c.simplices[bi].value;
      const double death = c.simplices[j].value;
      if (death > birth && k < c.dim_cap) out[k].pairs.push_back({birth, death, k, false, false});
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const int k = c.simplices[i].dim;
    if (k >= c.dim_cap || !is_creator[i] || is_killed[i]) continue;
    out[k].pairs.push_back({c.simplices[i].value, T, k, true, false});
  }
  for (auto& pd : out) {
    std::sort(pd.pairs.begin(), pd.pairs.end(),
              [](const PersistencePair& a, const PersistencePair& b) {
                if (a.birth != b.birth) return a.birth < b.birth;
                return a.death < b.death;
              });
  }
  return out;
}

}  // namespace topobreak::testing
