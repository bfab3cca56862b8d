#ifndef CPWLMAT_MATROID_HPP
#define CPWLMAT_MATROID_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cpwlmat/masks.hpp"

namespace cpwlmat {

/// Uniform matroid M_{n,k}: independent sets are the subsets of size <= k,
/// circuits are exactly the (k+1)-subsets (none when k = n).
struct UniformMatroid {
  int n;
  int k;

  UniformMatroid(int n_, int k_) : n(n_), k(k_) {
    check_ground_size(n);
    if (k < 0 || k > n) {
      throw std::invalid_argument("k: rank " + std::to_string(k) + " outside [0, " +
                                  std::to_string(n) + "]");
    }
  }
};

/// Dependence structure given by an explicit circuit family. The family is
/// deduplicated and sorted; empty circuits are rejected. Antichain and
/// circuit-elimination violations are allowed here and surfaced by
/// validate_circuit_axioms — downstream theory only needs
/// "dependent <=> contains a stored circuit".
struct CircuitMatroid {
  int n;
  std::vector<Mask> circuits;

  CircuitMatroid(int n_, std::vector<Mask> circuits_) : n(n_), circuits(std::move(circuits_)) {
    check_ground_size(n);
    for (Mask c : circuits) {
      if (c == 0) throw std::invalid_argument("circuits: empty circuit");
      check_mask(c, n, "circuit");
    }
    std::sort(circuits.begin(), circuits.end());
    circuits.erase(std::unique(circuits.begin(), circuits.end()), circuits.end());
  }
};

class Matroid {
 public:
  static Matroid uniform(int n, int k) { return Matroid(UniformMatroid(n, k)); }
  static Matroid from_circuits(int n, std::vector<Mask> circuits) {
    return Matroid(CircuitMatroid(n, std::move(circuits)));
  }

  explicit Matroid(UniformMatroid u) : impl_(std::move(u)) {}
  explicit Matroid(CircuitMatroid c) : impl_(std::move(c)) {}

  int ground_size() const {
    return std::visit([](const auto& m) { return m.n; }, impl_);
  }

  bool is_uniform() const { return std::holds_alternative<UniformMatroid>(impl_); }

  /// Rank parameter k for uniform matroids only.
  std::optional<int> uniform_rank() const {
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) return u->k;
    return std::nullopt;
  }

  bool is_independent(Mask s) const {
    check_mask(s, ground_size());
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) {
      return popcount(s) <= u->k;
    }
    const auto& c = std::get<CircuitMatroid>(impl_);
    for (Mask circuit : c.circuits) {
      if ((circuit & s) == circuit) return false;
    }
    return true;
  }

  bool is_dependent(Mask s) const { return !is_independent(s); }

  /// Circuit masks in increasing numeric order.
  std::vector<Mask> circuits() const {
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) {
      if (u->k == u->n) return {};
      return masks_of_popcount(u->n, u->k + 1);
    }
    return std::get<CircuitMatroid>(impl_).circuits;
  }

  std::size_t circuit_count() const {
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) {
      if (u->k == u->n) return 0;
      return binomial(u->n, u->k + 1);
    }
    return std::get<CircuitMatroid>(impl_).circuits.size();
  }

  /// Size of a maximum independent subset of S. Greedy over ascending
  /// elements; exact for matroids (checked against exhaustive search in
  /// the tests).
  int rank(Mask s) const {
    check_mask(s, ground_size());
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) {
      return std::min(popcount(s), u->k);
    }
    Mask acc = 0;
    for (int i = 0; i < ground_size(); ++i) {
      const Mask bit = Mask(1) << i;
      if ((s & bit) && is_independent(acc | bit)) acc |= bit;
    }
    return popcount(acc);
  }

  int rank() const { return rank(full_mask(ground_size())); }

  /// |I(M)|: closed form for uniform, exhaustive enumeration otherwise.
  std::uint64_t count_independent() const {
    if (const auto* u = std::get_if<UniformMatroid>(&impl_)) {
      std::uint64_t total = 0;
      for (int i = 0; i <= u->k; ++i) total += binomial(u->n, i);
      return total;
    }
    std::uint64_t total = 0;
    const Mask size = Mask(1) << ground_size();
    for (Mask s = 0; s < size; ++s) {
      if (is_independent(s)) ++total;
    }
    return total;
  }

  /// Independent sets in increasing mask order.
  std::vector<Mask> independent_sets() const {
    std::vector<Mask> out;
    const Mask size = Mask(1) << ground_size();
    for (Mask s = 0; s < size; ++s) {
      if (is_independent(s)) out.push_back(s);
    }
    return out;
  }

  static std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
      r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    }
    return r;
  }

 private:
  std::variant<UniformMatroid, CircuitMatroid> impl_;
};

struct CircuitAxiomReport {
  bool antichain = true;
  bool elimination = true;
  // First failing witnesses, when any.
  std::optional<std::pair<Mask, Mask>> antichain_witness;
  struct EliminationWitness {
    Mask c1;
    Mask c2;
    int element;  // 1-based
  };
  std::optional<EliminationWitness> elimination_witness;
};

/// Diagnostic check of the circuit axioms: antichain (no circuit contains
/// another) and elimination (for C1 != C2 and e in their intersection, some
/// stored circuit lies inside (C1 u C2) \ {e}). Exhaustive; n <= 12.
inline CircuitAxiomReport validate_circuit_axioms(const Matroid& m) {
  if (m.ground_size() > 12) {
    throw std::invalid_argument("validate_circuit_axioms: n > 12 exceeds exhaustive-check cap");
  }
  CircuitAxiomReport report;
  const std::vector<Mask> circuits = m.circuits();

  for (std::size_t i = 0; i < circuits.size() && report.antichain; ++i) {
    for (std::size_t j = 0; j < circuits.size(); ++j) {
      if (i == j) continue;
      if ((circuits[i] & circuits[j]) == circuits[i]) {
        report.antichain = false;
        report.antichain_witness = {circuits[i], circuits[j]};
        break;
      }
    }
  }

  for (std::size_t i = 0; i < circuits.size() && report.elimination; ++i) {
    for (std::size_t j = 0; j < circuits.size() && report.elimination; ++j) {
      if (i == j) continue;
      const Mask common = circuits[i] & circuits[j];
      if (common == 0) continue;
      for (int e = 0; e < m.ground_size(); ++e) {
        const Mask bit = Mask(1) << e;
        if (!(common & bit)) continue;
        const Mask target = (circuits[i] | circuits[j]) & ~bit;
        bool found = false;
        for (Mask c : circuits) {
          if ((c & target) == c) {
            found = true;
            break;
          }
        }
        if (!found) {
          report.elimination = false;
          report.elimination_witness = {circuits[i], circuits[j], e + 1};
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace cpwlmat

#endif  // CPWLMAT_MATROID_HPP
