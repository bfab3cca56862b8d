#ifndef CPWLMAT_CONSTRAINTS_HPP
#define CPWLMAT_CONSTRAINTS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpwlmat/masks.hpp"
#include "cpwlmat/matroid.hpp"
#include "cpwlmat/rational.hpp"
#include "cpwlmat/set_function.hpp"

namespace cpwlmat {

/// Circuit functional alpha_C(F) = sum_{S subset C} (-1)^{|C|-|S|} F(S).
/// Equals the Moebius transform of F evaluated at C; the two routes are
/// kept separate and cross-checked in the tests.
template <typename Scalar>
Scalar alpha(Mask circuit, const SetFunction<Scalar>& f) {
  check_mask(circuit, f.ground_size(), "circuit");
  const int csign = parity_sign(circuit);
  Scalar acc(0);
  for_each_submask(circuit, [&](Mask s) {
    // (-1)^{|C|-|S|} = parity(C) * parity(S).
    if (csign * parity_sign(s) >= 0) {
      acc += f[s];
    } else {
      acc -= f[s];
    }
  });
  return acc;
}

/// Rows = circuits (in circuits(M) order), columns = subsets; entry at
/// (C, S) is (-1)^{|C|-|S|} when S subset C, else 0. Stored sparsely.
class ConstraintMatrix {
 public:
  struct Entry {
    Mask column;
    int sign;  // +1 or -1
  };

  ConstraintMatrix(int n, std::vector<Mask> row_index) : n_(n), row_index_(std::move(row_index)) {
    rows_.reserve(row_index_.size());
    for (Mask c : row_index_) {
      std::vector<Entry> row;
      row.reserve(std::size_t(1) << popcount(c));
      const int csign = parity_sign(c);
      for_each_submask(c, [&](Mask s) { row.push_back({s, csign * parity_sign(s)}); });
      std::sort(row.begin(), row.end(),
                [](const Entry& a, const Entry& b) { return a.column < b.column; });
      rows_.push_back(std::move(row));
    }
  }

  int ground_size() const { return n_; }
  std::size_t row_count() const { return rows_.size(); }
  Mask column_count() const { return Mask(1) << n_; }
  const std::vector<Mask>& row_index() const { return row_index_; }
  const std::vector<Entry>& row(std::size_t r) const { return rows_[r]; }

  /// T applied to vec(F): the vector (alpha_C(F))_C.
  template <typename Scalar>
  VecX<Scalar> apply(const SetFunction<Scalar>& f) const {
    if (f.ground_size() != n_) {
      throw std::invalid_argument("apply: set function n mismatch");
    }
    VecX<Scalar> out = VecX<Scalar>::Constant(Eigen::Index(rows_.size()), Scalar(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Scalar acc(0);
      for (const Entry& e : rows_[r]) {
        if (e.sign > 0) {
          acc += f[e.column];
        } else {
          acc -= f[e.column];
        }
      }
      out[Eigen::Index(r)] = acc;
    }
    return out;
  }

  /// Dense materialization; test oracles only (2^n columns).
  MatX<Rational> dense() const {
    MatX<Rational> m = MatX<Rational>::Constant(Eigen::Index(rows_.size()),
                                                Eigen::Index(column_count()), Rational(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const Entry& e : rows_[r]) {
        m(Eigen::Index(r), Eigen::Index(e.column)) = Rational(e.sign);
      }
    }
    return m;
  }

 private:
  int n_;
  std::vector<Mask> row_index_;
  std::vector<std::vector<Entry>> rows_;
};

inline ConstraintMatrix build_constraint_matrix(const Matroid& m) {
  return ConstraintMatrix(m.ground_size(), m.circuits());
}

/// Rank over Q by fraction-free (Bareiss) elimination. Deterministic:
/// columns are swept left to right, the pivot is the first nonzero row.
/// Intermediate values stay integral for integral input.
inline int rank_exact(MatX<Rational> a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  int rank = 0;
  Rational prev(1);
  for (Eigen::Index col = 0; col < cols && rank < rows; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = rank; r < rows; ++r) {
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) a.row(pivot).swap(a.row(rank));
    const Rational p = a(rank, col);
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      const Rational factor = a(r, col);
      for (Eigen::Index c = col + 1; c < cols; ++c) {
        a(r, c) = (a(r, c) * p - factor * a(rank, c)) / prev;
      }
      a(r, col) = Rational(0);
    }
    prev = p;
    ++rank;
  }
  return rank;
}

namespace detail {

using SparseRow = std::vector<std::pair<Mask, Rational>>;  // sorted by column

inline SparseRow axpy_sparse(const SparseRow& target, const Rational& factor,
                             const SparseRow& pivot_row) {
  // target - factor * pivot_row, dropping exact zeros.
  SparseRow out;
  out.reserve(target.size() + pivot_row.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < target.size() || j < pivot_row.size()) {
    if (j == pivot_row.size() || (i < target.size() && target[i].first < pivot_row[j].first)) {
      out.push_back(target[i]);
      ++i;
    } else if (i == target.size() || pivot_row[j].first < target[i].first) {
      out.emplace_back(pivot_row[j].first, -(factor * pivot_row[j].second));
      ++j;
    } else {
      Rational v = target[i].second - factor * pivot_row[j].second;
      if (!v.is_zero()) out.emplace_back(target[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

/// Exact rank of the sparse constraint matrix over Q. Gaussian elimination
/// with deterministic sparsity-aware pivoting: pivot column = fewest active
/// nonzeros (ties: smallest mask), pivot row = fewest nonzeros among rows
/// hitting that column (ties: smallest row index).
inline int sparse_rank(const ConstraintMatrix& t) {
  std::vector<detail::SparseRow> rows;
  rows.reserve(t.row_count());
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    detail::SparseRow row;
    row.reserve(t.row(r).size());
    for (const auto& e : t.row(r)) row.emplace_back(e.column, Rational(e.sign));
    rows.push_back(std::move(row));
  }

  std::map<Mask, int> col_count;
  std::vector<bool> active(rows.size(), true);
  for (const auto& row : rows) {
    for (const auto& [col, v] : row) ++col_count[col];
  }

  int rank = 0;
  for (;;) {
    // Pick pivot column: min active count, then min column value.
    Mask pivot_col = 0;
    int best = -1;
    for (const auto& [col, count] : col_count) {
      if (count > 0 && (best < 0 || count < best)) {
        best = count;
        pivot_col = col;
      }
    }
    if (best < 0) break;

    std::size_t pivot_row = rows.size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!active[r]) continue;
      const auto& row = rows[r];
      const bool hits = std::binary_search(
          row.begin(), row.end(), std::make_pair(pivot_col, Rational(0)),
          [](const auto& a, const auto& b) { return a.first < b.first; });
      if (!hits) continue;
      if (pivot_row == rows.size() || row.size() < rows[pivot_row].size()) pivot_row = r;
    }

    ++rank;
    active[pivot_row] = false;
    for (const auto& [col, v] : rows[pivot_row]) --col_count[col];

    const auto& prow = rows[pivot_row];
    const auto pivot_it =
        std::lower_bound(prow.begin(), prow.end(), pivot_col,
                         [](const auto& entry, Mask col) { return entry.first < col; });
    const Rational pivot_value = pivot_it->second;

    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!active[r]) continue;
      auto& row = rows[r];
      const auto it = std::lower_bound(row.begin(), row.end(), pivot_col,
                                       [](const auto& entry, Mask col) { return entry.first < col; });
      if (it == row.end() || it->first != pivot_col) continue;
      const Rational factor = it->second / pivot_value;
      for (const auto& [col, v] : row) --col_count[col];
      row = detail::axpy_sparse(row, factor, prow);
      for (const auto& [col, v] : row) ++col_count[col];
    }
  }
  return rank;
}

/// Exact dimension bookkeeping for ker(T) vs. the Moebius-support space.
/// kernel_dim counts functions annihilated by every circuit functional;
/// independent_count is the dimension of the space of functions whose
/// Moebius transform is supported on independent sets. The discrepancy is
/// their (always nonnegative) difference.
struct DimensionReport {
  int n = 0;
  std::optional<int> k;  // uniform matroids only
  std::uint64_t circuit_count = 0;
  std::uint64_t rank_t = 0;
  std::uint64_t kernel_dim = 0;
  std::uint64_t independent_count = 0;
  std::uint64_t discrepancy = 0;
};

inline constexpr int kExactRankCap = 14;

inline DimensionReport kernel_dimension(const Matroid& m) {
  const int n = m.ground_size();
  if (n > kExactRankCap) {
    throw std::invalid_argument("kernel_dimension: n > " + std::to_string(kExactRankCap) +
                                " exceeds the exact rank cap");
  }
  DimensionReport report;
  report.n = n;
  report.k = m.uniform_rank();
  report.circuit_count = m.circuit_count();
  report.rank_t = std::uint64_t(sparse_rank(build_constraint_matrix(m)));
  report.kernel_dim = (std::uint64_t(1) << n) - report.rank_t;
  report.independent_count = m.count_independent();
  report.discrepancy = report.kernel_dim - report.independent_count;
  return report;
}

enum class MembershipModel {
  kCircuitOnly,     // alpha_C(F) = 0 for all circuits C
  kMoebiusSupport,  // Fhat(S) = 0 for all dependent S
};

template <typename Scalar>
struct MembershipVerdict {
  bool member = true;
  std::vector<std::pair<Mask, Scalar>> violations;  // (mask, residual), mask ascending
};

/// Membership of F in the circuit-constrained space under either model.
/// Moebius-support membership implies circuit-only membership; the
/// converse fails once some dependent set is not a circuit.
template <typename Scalar>
MembershipVerdict<Scalar> membership(const SetFunction<Scalar>& f, const Matroid& m,
                                     MembershipModel model, double threshold = 0.0) {
  if (f.ground_size() != m.ground_size()) {
    throw std::invalid_argument("membership: set function and matroid n mismatch");
  }
  const MoebiusSpectrum<Scalar> spec = moebius_transform(f);
  MembershipVerdict<Scalar> verdict;
  auto consider = [&](Mask s) {
    if (!is_negligible(spec[s], threshold)) {
      verdict.member = false;
      verdict.violations.emplace_back(s, spec[s]);
    }
  };
  if (model == MembershipModel::kCircuitOnly) {
    for (Mask c : m.circuits()) consider(c);
  } else {
    for (Mask s = 0; s < f.subset_count(); ++s) {
      if (m.is_dependent(s)) consider(s);
    }
  }
  return verdict;
}

}  // namespace cpwlmat

#endif  // CPWLMAT_CONSTRAINTS_HPP
