#ifndef CPWLMAT_RATIONAL_HPP
#define CPWLMAT_RATIONAL_HPP

#include <Eigen/Core>
#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cpwlmat {

/// Arbitrary-precision rational, always kept in canonical form:
/// lowest terms, positive denominator. Thin value wrapper around GMP's
/// mpq so that all operators return plain Rationals (no expression
/// templates leak into Eigen).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}          // NOLINT: implicit by design
  Rational(long n) : v_(n) {}         // NOLINT
  Rational(long long n) : v_(static_cast<long>(n)) {}
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  /// Parses "p" or "p/q" (base 10, optional leading '-').
  static Rational parse(std::string_view text) {
    const std::string s(text);
    const auto slash = s.find('/');
    mpz_class num, den(1);
    const std::string num_part = slash == std::string::npos ? s : s.substr(0, slash);
    if (!set_integer(num, num_part)) {
      throw std::invalid_argument("Rational: malformed numerator in '" + s + "'");
    }
    if (slash != std::string::npos) {
      if (!set_integer(den, s.substr(slash + 1))) {
        throw std::invalid_argument("Rational: malformed denominator in '" + s + "'");
      }
      if (den == 0) throw std::domain_error("Rational: zero denominator in '" + s + "'");
    }
    Rational r;
    r.v_ = mpq_class(num, den);
    r.v_.canonicalize();
    return r;
  }

  const mpz_class num() const { return v_.get_num(); }
  const mpz_class den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  double to_double() const { return v_.get_d(); }

  /// "p" when the value is integral, "p/q" otherwise.
  std::string str() const {
    std::string s = v_.get_num().get_str();
    if (v_.get_den() != 1) {
      s += '/';
      s += v_.get_den().get_str();
    }
    return s;
  }

  Rational operator-() const { return Rational(mpq_class(-v_), already_canonical{}); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  struct already_canonical {};
  Rational(mpq_class q, already_canonical) : v_(std::move(q)) {}

  // Strict base-10 integer: optional sign, then digits only.
  static bool set_integer(mpz_class& out, const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return out.set_str(s, 10) == 0;
  }

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace cpwlmat

namespace Eigen {

template <>
struct NumTraits<cpwlmat::Rational> : GenericNumTraits<cpwlmat::Rational> {
  using Real = cpwlmat::Rational;
  using NonInteger = cpwlmat::Rational;
  using Nested = cpwlmat::Rational;
  using Literal = long;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 32,
    MulCost = 32,
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // CPWLMAT_RATIONAL_HPP
