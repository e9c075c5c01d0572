#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace polyapprox {

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
// standard; the uniform/normal transforms below are our own, so a given
// (seed, call sequence) reproduces streams bit-for-bit. Substreams for
// parallel chunks come from derive().
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix(seed)), seed_mixed_(mix(seed)) {}

  /// Independent substream keyed by (this seed, tag).
  Rng derive(uint64_t tag) const {
    return Rng(seed_mixed_ ^ mix(tag + 0x9e3779b97f4a7c15ULL), from_mixed{});
  }

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one trig pair per call, no cached spare).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Uniform integer in [0, n), n >= 1; rejection kills modulo bias.
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  struct from_mixed {};
  Rng(uint64_t mixed, from_mixed) : engine_(mixed), seed_mixed_(mixed) {}

  static uint64_t mix(uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  uint64_t seed_mixed_;
};

}  // namespace polyapprox
