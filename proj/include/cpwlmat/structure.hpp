#ifndef CPWLMAT_STRUCTURE_HPP
#define CPWLMAT_STRUCTURE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpwlmat/constraints.hpp"
#include "cpwlmat/masks.hpp"
#include "cpwlmat/matroid.hpp"
#include "cpwlmat/set_function.hpp"

namespace cpwlmat {

/// phi_T(S) = 1 if T subset S else 0; the canonical basis element for an
/// independent set T.
template <typename Scalar = Rational>
SetFunction<Scalar> phi(Mask t, int n) {
  check_mask(t, n, "basis set");
  SetFunction<Scalar> f(n);
  for (Mask s = 0; s < f.subset_count(); ++s) {
    if ((s & t) == t) f[s] = Scalar(1);
  }
  return f;
}

/// Coordinates of F in the canonical basis {phi_T : T independent}:
/// coeffs are indexed by the independent sets of the matroid, in mask
/// order; missing input coefficients read as zero.
template <typename Scalar>
class BasisCoefficients {
 public:
  BasisCoefficients(Matroid matroid, std::vector<std::pair<Mask, Scalar>> coeffs)
      : matroid_(std::move(matroid)) {
    // Normalize: exactly one coefficient per independent set.
    const std::vector<Mask> independents = matroid_.independent_sets();
    coeffs_.reserve(independents.size());
    std::sort(coeffs.begin(), coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t j = 0;
    for (Mask t : independents) {
      Scalar v(0);
      while (j < coeffs.size() && coeffs[j].first < t) {
        throw_not_independent(coeffs[j].first);
      }
      if (j < coeffs.size() && coeffs[j].first == t) {
        v = coeffs[j].second;
        ++j;
      }
      coeffs_.emplace_back(t, std::move(v));
    }
    if (j < coeffs.size()) throw_not_independent(coeffs[j].first);
  }

  const Matroid& matroid() const { return matroid_; }
  const std::vector<std::pair<Mask, Scalar>>& coeffs() const { return coeffs_; }

  const Scalar& at(Mask t) const {
    const auto it = std::lower_bound(
        coeffs_.begin(), coeffs_.end(), t,
        [](const auto& entry, Mask mask) { return entry.first < mask; });
    if (it == coeffs_.end() || it->first != t) throw_not_independent(t);
    return it->second;
  }

 private:
  [[noreturn]] static void throw_not_independent(Mask t) {
    throw std::invalid_argument("coeffs: set with mask " + std::to_string(t) +
                                " is not independent in the matroid");
  }

  Matroid matroid_;
  std::vector<std::pair<Mask, Scalar>> coeffs_;
};

/// Splits the Moebius transform of F into canonical-basis coordinates
/// (independent sets) and the residual mass on dependent sets. The
/// residual is empty exactly when F lies in the Moebius-support space.
template <typename Scalar>
std::pair<BasisCoefficients<Scalar>, std::vector<std::pair<Mask, Scalar>>> decompose(
    const SetFunction<Scalar>& f, const Matroid& m, double threshold = 0.0) {
  if (f.ground_size() != m.ground_size()) {
    throw std::invalid_argument("decompose: set function and matroid n mismatch");
  }
  const MoebiusSpectrum<Scalar> spec = moebius_transform(f);
  std::vector<std::pair<Mask, Scalar>> coeffs;
  std::vector<std::pair<Mask, Scalar>> residual;
  for (Mask s = 0; s < f.subset_count(); ++s) {
    if (m.is_independent(s)) {
      coeffs.emplace_back(s, spec[s]);
    } else if (!is_negligible(spec[s], threshold)) {
      residual.emplace_back(s, spec[s]);
    }
  }
  return {BasisCoefficients<Scalar>(m, std::move(coeffs)), std::move(residual)};
}

/// F(S) = sum over independent T subset S of c_T.
template <typename Scalar>
SetFunction<Scalar> reconstruct(const BasisCoefficients<Scalar>& c) {
  const int n = c.matroid().ground_size();
  VecX<Scalar> spectrum = VecX<Scalar>::Constant(Mask(1) << n, Scalar(0));
  for (const auto& [t, v] : c.coeffs()) spectrum[t] = v;
  return zeta_transform(MoebiusSpectrum<Scalar>(n, std::move(spectrum)));
}

/// Truncation of the Moebius transform to independent support: idempotent,
/// fixes the Moebius-support space pointwise, always lands in it.
template <typename Scalar>
SetFunction<Scalar> project(const SetFunction<Scalar>& f, const Matroid& m) {
  if (f.ground_size() != m.ground_size()) {
    throw std::invalid_argument("project: set function and matroid n mismatch");
  }
  const MoebiusSpectrum<Scalar> spec = moebius_transform(f);
  VecX<Scalar> truncated = spec.values();
  for (Mask s = 0; s < f.subset_count(); ++s) {
    if (!m.is_independent(s)) truncated[s] = Scalar(0);
  }
  return zeta_transform(MoebiusSpectrum<Scalar>(f.ground_size(), std::move(truncated)));
}

/// Values of F on every subset of size <= k; the free data determining a
/// member of the rank-k space.
template <typename Scalar>
class LowOrderTable {
 public:
  LowOrderTable(int n, int k, std::vector<std::pair<Mask, Scalar>> entries)
      : n_(n), k_(k), entries_(std::move(entries)) {
    check_ground_size(n);
    if (k < 0 || k > n) {
      throw std::invalid_argument("k: order " + std::to_string(k) + " outside [0, " +
                                  std::to_string(n) + "]");
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t expected = 0;
    for (int i = 0; i <= k; ++i) expected += Matroid::binomial(n, i);
    if (entries_.size() != expected) {
      throw std::invalid_argument("table: expected " + std::to_string(expected) +
                                  " entries for all subsets of size <= " + std::to_string(k) +
                                  ", got " + std::to_string(entries_.size()));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      check_mask(entries_[i].first, n, "table key");
      if (popcount(entries_[i].first) > k) {
        throw std::invalid_argument("table key " + std::to_string(entries_[i].first) +
                                    " has more than " + std::to_string(k) + " elements");
      }
      if (i > 0 && entries_[i].first == entries_[i - 1].first) {
        throw std::invalid_argument("table key " + std::to_string(entries_[i].first) +
                                    " appears twice");
      }
    }
  }

  int ground_size() const { return n_; }
  int order() const { return k_; }
  const std::vector<std::pair<Mask, Scalar>>& entries() const { return entries_; }

 private:
  int n_;
  int k_;
  std::vector<std::pair<Mask, Scalar>> entries_;
};

/// The unique member of the rank-k Moebius-support space agreeing with the
/// table on all subsets of size <= k. Computed transform-side: pad the
/// table, Moebius-transform (coordinates of size <= k only read table
/// values), zero the dependent coordinates, zeta-transform back. The
/// triple-by-triple recursion is kept as a test oracle.
template <typename Scalar>
SetFunction<Scalar> extend_from_low_order(const LowOrderTable<Scalar>& table,
                                          const UniformMatroid& m) {
  if (table.ground_size() != m.n) {
    throw std::invalid_argument("extend: table n " + std::to_string(table.ground_size()) +
                                " does not match matroid n " + std::to_string(m.n));
  }
  if (table.order() != m.k) {
    throw std::invalid_argument("extend: table order " + std::to_string(table.order()) +
                                " does not match matroid rank " + std::to_string(m.k));
  }
  const int n = m.n;
  VecX<Scalar> padded = VecX<Scalar>::Constant(Mask(1) << n, Scalar(0));
  for (const auto& [mask, v] : table.entries()) padded[mask] = v;
  detail::subset_sweep(n, padded, [](Scalar& hi, const Scalar& lo) { hi -= lo; });
  for (Mask s = 0; s < Mask(1) << n; ++s) {
    if (popcount(s) > m.k) padded[s] = Scalar(0);
  }
  return zeta_transform(MoebiusSpectrum<Scalar>(n, std::move(padded)));
}

template <typename Scalar>
struct TripleViolation {
  Mask triple;
  Scalar residual;
};

/// Residual of the three-element circuit relation for every triple:
/// F(ijk) - F(ij) - F(ik) - F(jk) + F(i) + F(j) + F(k) - F(empty).
/// Empty result == all triple functionals vanish. Vacuous for n < 3.
template <typename Scalar>
std::vector<TripleViolation<Scalar>> triple_relation_check(const SetFunction<Scalar>& f,
                                                           double threshold = 0.0) {
  std::vector<TripleViolation<Scalar>> violations;
  const int n = f.ground_size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Mask bi = Mask(1) << i;
        const Mask bj = Mask(1) << j;
        const Mask bk = Mask(1) << k;
        Scalar residual = f[bi | bj | bk];
        residual -= f[bi | bj];
        residual -= f[bi | bk];
        residual -= f[bj | bk];
        residual += f[bi];
        residual += f[bj];
        residual += f[bk];
        residual -= f[0];
        if (!is_negligible(residual, threshold)) {
          violations.push_back({bi | bj | bk, std::move(residual)});
        }
      }
    }
  }
  return violations;
}

}  // namespace cpwlmat

#endif  // CPWLMAT_STRUCTURE_HPP
