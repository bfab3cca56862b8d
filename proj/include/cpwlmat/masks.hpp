#ifndef CPWLMAT_MASKS_HPP
#define CPWLMAT_MASKS_HPP

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpwlmat {

/// Subset of [n] encoded as a bitmask: bit i-1 set <=> element i in S.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask full_mask(int n) { return (n >= 32) ? ~Mask(0) : ((Mask(1) << n) - 1); }

inline constexpr int kDefaultGroundCap = 20;

/// Hard cap on the ground-set size, overridable through CPWLMAT_MAX_N
/// (at the user's risk; dense storage is 2^n entries).
inline int ground_size_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("CPWLMAT_MAX_N")) {
      const int v = std::atoi(env);
      if (v >= 1 && v <= 30) return v;
    }
    return kDefaultGroundCap;
  }();
  return cap;
}

inline void check_ground_size(int n) {
  if (n < 1 || n > ground_size_cap()) {
    throw std::invalid_argument("n: ground-set size " + std::to_string(n) +
                                " outside [1, " + std::to_string(ground_size_cap()) + "]");
  }
}

inline void check_mask(Mask m, int n, const char* what = "mask") {
  if (n < 32 && m >= (Mask(1) << n)) {
    throw std::out_of_range(std::string(what) + ": " + std::to_string(m) +
                            " out of range for n=" + std::to_string(n));
  }
}

/// +1 for even popcount, -1 for odd.
inline int parity_sign(Mask m) { return (popcount(m) & 1) ? -1 : +1; }

/// All submasks of m in decreasing order, m itself first, 0 last.
template <typename Fn>
void for_each_submask(Mask m, Fn&& fn) {
  Mask sub = m;
  while (true) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & m;
  }
}

/// All masks of n bits with exactly k set, in increasing numeric order.
inline std::vector<Mask> masks_of_popcount(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  Mask m = (Mask(1) << k) - 1;
  const Mask limit = Mask(1) << n;
  while (m < limit) {
    out.push_back(m);
    // Gosper's hack: next mask with the same popcount.
    const Mask c = m & -m;
    const Mask r = m + c;
    const Mask next = (((r ^ m) >> 2) / c) | r;
    if (next <= m) break;  // overflow guard
    m = next;
  }
  return out;
}

/// 1-based element list for display/serialization.
inline std::vector<int> mask_to_elements(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1) {
    if (m & 1u) out.push_back(i + 1);
  }
  return out;
}

inline Mask elements_to_mask(const std::vector<int>& elems, int n) {
  Mask m = 0;
  for (int e : elems) {
    if (e < 1 || e > n) {
      throw std::out_of_range("element " + std::to_string(e) + " outside [1, " +
                              std::to_string(n) + "]");
    }
    m |= Mask(1) << (e - 1);
  }
  return m;
}

}  // namespace cpwlmat

#endif  // CPWLMAT_MASKS_HPP
