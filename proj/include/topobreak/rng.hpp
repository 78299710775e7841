#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace topobreak {

// Counter-derived random streams. A stream is identified by
// (master seed, phase label, up to two counter indices); the generator state
// depends on nothing else, so work can be distributed across threads in any
// order without changing results.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::string_view phase, std::uint64_t i0 = 0,
            std::uint64_t i1 = 0)
      : eng_(derive_seed(master, phase, i0, i1)) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform() { return unif_(eng_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return norm_(eng_); }

  static std::uint64_t derive_seed(std::uint64_t master, std::string_view phase,
                                   std::uint64_t i0, std::uint64_t i1) {
    std::uint64_t h = splitmix(master ^ fnv1a(phase));
    h = splitmix(h ^ (i0 * 0x9e3779b97f4a7c15ULL));
    h = splitmix(h ^ (i1 * 0xbf58476d1ce4e5b9ULL));
    return h;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace topobreak
