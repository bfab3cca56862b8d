#ifndef CPWLMAT_SET_FUNCTION_HPP
#define CPWLMAT_SET_FUNCTION_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpwlmat/masks.hpp"
#include "cpwlmat/rational.hpp"

namespace cpwlmat {

template <typename Scalar>
using VecX = Eigen::Vector<Scalar, Eigen::Dynamic>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Compile-time scalar backend: Rational ("exact") or double ("float64").
template <typename Scalar>
struct ScalarMode;

template <>
struct ScalarMode<Rational> {
  static constexpr bool is_exact = true;
  static constexpr const char* name = "exact";
};

template <>
struct ScalarMode<double> {
  static constexpr bool is_exact = false;
  static constexpr const char* name = "float64";
};

inline Rational scalar_abs(const Rational& x) { return abs(x); }
inline double scalar_abs(double x) { return std::abs(x); }

template <typename Scalar>
Scalar make_scalar(long num, long den = 1);

template <>
inline Rational make_scalar<Rational>(long num, long den) {
  return Rational(num, den);
}

template <>
inline double make_scalar<double>(long num, long den) {
  return double(num) / double(den);
}

/// Zero test at a float threshold; exact scalars ignore the threshold.
inline bool is_negligible(const Rational& x, double) { return x.is_zero(); }
inline bool is_negligible(double x, double threshold) { return std::abs(x) <= threshold; }

/// Float comparisons use a relative tolerance with an absolute floor;
/// exact-mode checks use threshold 0.
struct Tolerance {
  double rel = 1e-9;
  double abs_floor = 1e-12;
  double threshold(double scale) const { return std::max(abs_floor, rel * std::abs(scale)); }
};

/// Dense F : 2^[n] -> R indexed by subset bitmask.
template <typename Scalar>
class SetFunction {
 public:
  explicit SetFunction(int n) : n_(n) {
    check_ground_size(n);
    values_ = VecX<Scalar>::Constant(Mask(1) << n, Scalar(0));
  }

  SetFunction(int n, VecX<Scalar> values) : n_(n), values_(std::move(values)) {
    check_ground_size(n);
    if (values_.size() != Eigen::Index(Mask(1) << n)) {
      throw std::invalid_argument("values: expected " + std::to_string(Mask(1) << n) +
                                  " entries, got " + std::to_string(values_.size()));
    }
  }

  int ground_size() const { return n_; }
  Mask subset_count() const { return Mask(1) << n_; }

  const Scalar& operator[](Mask s) const { return values_[s]; }
  Scalar& operator[](Mask s) { return values_[s]; }

  const Scalar& at(Mask s) const {
    check_mask(s, n_);
    return values_[s];
  }

  const VecX<Scalar>& values() const { return values_; }

  /// Largest |F(S)|; the scale used by float-mode tolerances.
  double max_abs() const {
    double m = 0.0;
    for (Mask s = 0; s < subset_count(); ++s) {
      const double a = std::abs(value_as_double(values_[s]));
      m = std::max(m, a);
    }
    return m;
  }

  friend bool operator==(const SetFunction& a, const SetFunction& b) {
    if (a.n_ != b.n_) return false;
    for (Mask s = 0; s < a.subset_count(); ++s) {
      if (!(a.values_[s] == b.values_[s])) return false;
    }
    return true;
  }

 private:
  static double value_as_double(const Rational& r) { return r.to_double(); }
  static double value_as_double(double d) { return d; }

  int n_;
  VecX<Scalar> values_;
};

using ExactSetFunction = SetFunction<Rational>;
using FloatSetFunction = SetFunction<double>;

/// 0/1 indicator vector of S in R^n.
template <typename Scalar = Rational>
VecX<Scalar> indicator_vector(Mask s, int n) {
  check_ground_size(n);
  check_mask(s, n);
  VecX<Scalar> x = VecX<Scalar>::Constant(n, Scalar(0));
  for (int i = 0; i < n; ++i) {
    if (s & (Mask(1) << i)) x[i] = Scalar(1);
  }
  return x;
}

/// Per-cardinality aggregates of |Fhat|.
template <typename Scalar>
struct OrderStats {
  int order = 0;
  Scalar max_abs{0};
  Scalar sum_abs{0};
};

/// The Moebius transform Fhat of a set function, with per-order norms.
/// zeta_transform(moebius_transform(F)) == F exactly in exact mode.
template <typename Scalar>
class MoebiusSpectrum {
 public:
  MoebiusSpectrum(int n, VecX<Scalar> values) : n_(n), values_(std::move(values)) {
    check_ground_size(n);
    if (values_.size() != Eigen::Index(Mask(1) << n)) {
      throw std::invalid_argument("spectrum: expected " + std::to_string(Mask(1) << n) +
                                  " entries, got " + std::to_string(values_.size()));
    }
    order_norms_.assign(n_ + 1, OrderStats<Scalar>{});
    for (int d = 0; d <= n_; ++d) order_norms_[d].order = d;
    for (Mask s = 0; s < Mask(1) << n_; ++s) {
      const Scalar a = scalar_abs(values_[s]);
      auto& st = order_norms_[popcount(s)];
      st.sum_abs += a;
      if (a > st.max_abs) st.max_abs = a;
    }
  }

  int ground_size() const { return n_; }
  Mask subset_count() const { return Mask(1) << n_; }
  const Scalar& operator[](Mask s) const { return values_[s]; }
  const VecX<Scalar>& values() const { return values_; }

  const std::vector<OrderStats<Scalar>>& order_norms() const { return order_norms_; }

  /// Largest d whose max-abs mass exceeds the threshold (-1 when empty).
  int max_interaction_order(double threshold = 0.0) const {
    int order = -1;
    for (int d = 0; d <= n_; ++d) {
      if (!is_negligible(order_norms_[d].max_abs, threshold)) order = d;
    }
    return order;
  }

 private:
  int n_;
  VecX<Scalar> values_;
  std::vector<OrderStats<Scalar>> order_norms_;
};

namespace detail {

// Yates-style in-place sweep, one lattice dimension at a time: O(n 2^n).
template <typename Scalar, typename Step>
void subset_sweep(int n, VecX<Scalar>& v, Step step) {
  const Mask size = Mask(1) << n;
  for (int b = 0; b < n; ++b) {
    const Mask bit = Mask(1) << b;
    for (Mask m = 0; m < size; ++m) {
      if (m & bit) step(v[m], v[m ^ bit]);
    }
  }
}

}  // namespace detail

/// Fhat(S) = sum_{T subset S} (-1)^{|S|-|T|} F(T).
template <typename Scalar>
MoebiusSpectrum<Scalar> moebius_transform(const SetFunction<Scalar>& f) {
  VecX<Scalar> v = f.values();
  detail::subset_sweep(f.ground_size(), v, [](Scalar& hi, const Scalar& lo) { hi -= lo; });
  return MoebiusSpectrum<Scalar>(f.ground_size(), std::move(v));
}

/// F(S) = sum_{T subset S} Fhat(T); exact two-sided inverse of the above.
template <typename Scalar>
SetFunction<Scalar> zeta_transform(const MoebiusSpectrum<Scalar>& spec) {
  VecX<Scalar> v = spec.values();
  detail::subset_sweep(spec.ground_size(), v, [](Scalar& hi, const Scalar& lo) { hi += lo; });
  return SetFunction<Scalar>(spec.ground_size(), std::move(v));
}

namespace detail {

template <typename Scalar>
void check_same_shape(const SetFunction<Scalar>& a, const SetFunction<Scalar>& b) {
  if (a.ground_size() != b.ground_size()) {
    throw std::invalid_argument("set functions have mismatched n: " +
                                std::to_string(a.ground_size()) + " vs " +
                                std::to_string(b.ground_size()));
  }
}

}  // namespace detail

template <typename Scalar>
SetFunction<Scalar> operator+(const SetFunction<Scalar>& a, const SetFunction<Scalar>& b) {
  detail::check_same_shape(a, b);
  return SetFunction<Scalar>(a.ground_size(), VecX<Scalar>(a.values() + b.values()));
}

template <typename Scalar>
SetFunction<Scalar> operator-(const SetFunction<Scalar>& a, const SetFunction<Scalar>& b) {
  detail::check_same_shape(a, b);
  return SetFunction<Scalar>(a.ground_size(), VecX<Scalar>(a.values() - b.values()));
}

template <typename Scalar>
SetFunction<Scalar> operator*(const Scalar& c, const SetFunction<Scalar>& f) {
  VecX<Scalar> v = f.values();
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = c * v[i];
  return SetFunction<Scalar>(f.ground_size(), std::move(v));
}

template <typename Scalar>
SetFunction<Scalar> pointwise_max(const SetFunction<Scalar>& a, const SetFunction<Scalar>& b) {
  detail::check_same_shape(a, b);
  VecX<Scalar> v = a.values();
  for (Mask s = 0; s < a.subset_count(); ++s) {
    if (b[s] > v[s]) v[s] = b[s];
  }
  return SetFunction<Scalar>(a.ground_size(), std::move(v));
}

}  // namespace cpwlmat

#endif  // CPWLMAT_SET_FUNCTION_HPP
