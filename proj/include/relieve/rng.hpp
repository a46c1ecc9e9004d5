#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "relieve/errors.hpp"

namespace relieve {

// Deterministic random source. Every stochastic choice in the library goes
// through one of these, so a (seed, parameters) pair always reproduces the
// same output. The integer and shuffle primitives are implemented here
// instead of with std:: distributions because the standard does not pin
// their output sequences; mt19937_64 itself is fully specified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi], both ends inclusive. Rejection sampling,
  // so the draw is unbiased for any range width.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw UsageError("uniform_int: empty range");
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full width
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return lo + static_cast<std::int64_t>(x % range);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw UsageError("bernoulli: p outside [0, 1]");
    return uniform_real() < p;
  }

  // Fisher-Yates; consumes exactly v.size()-1 draws for non-trivial sizes.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relieve
