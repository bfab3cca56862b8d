#ifndef CPWLMAT_RNG_HPP
#define CPWLMAT_RNG_HPP

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "cpwlmat/rational.hpp"

namespace cpwlmat {

/// Seeded deterministic randomness. std::mt19937_64 output is specified by
/// the standard, and the helpers below avoid std::uniform_int_distribution
/// (whose mapping is implementation-defined), so identical seeds produce
/// identical draws on every platform.
using Rng = std::mt19937_64;

/// Uniform draw from [0, bound), bound >= 1.
inline std::uint64_t rng_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % bound;
}

inline long rng_range(Rng& rng, long lo, long hi) {
  return lo + long(rng_below(rng, std::uint64_t(hi - lo + 1)));
}

/// Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = int(rng_below(rng, std::uint64_t(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

inline Rational random_rational(Rng& rng, long max_num = 20, long max_den = 6) {
  return Rational(rng_range(rng, -max_num, max_num), rng_range(rng, 1, max_den));
}

}  // namespace cpwlmat

#endif  // CPWLMAT_RNG_HPP
