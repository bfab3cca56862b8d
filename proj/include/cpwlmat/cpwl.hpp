#ifndef CPWLMAT_CPWL_HPP
#define CPWLMAT_CPWL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpwlmat/masks.hpp"
#include "cpwlmat/rng.hpp"
#include "cpwlmat/set_function.hpp"

namespace cpwlmat {

/// Maximal cone of the braid fan: {x : x_{w(0)} >= x_{w(1)} >= ...} for a
/// permutation w of the (0-based) coordinate indices.
struct BraidCone {
  std::vector<int> order;

  explicit BraidCone(std::vector<int> order_) : order(std::move(order_)) {
    std::vector<bool> seen(order.size(), false);
    for (int i : order) {
      if (i < 0 || std::size_t(i) >= order.size() || seen[i]) {
        throw std::invalid_argument("cone: order is not a permutation");
      }
      seen[i] = true;
    }
  }

  int dim() const { return int(order.size()); }

  /// Chain mask after the first `count` elements: {w(0), ..., w(count-1)}.
  Mask chain_mask(int count) const {
    Mask m = 0;
    for (int i = 0; i < count; ++i) m |= Mask(1) << order[i];
    return m;
  }

  friend bool operator<(const BraidCone& a, const BraidCone& b) { return a.order < b.order; }
  friend bool operator==(const BraidCone& a, const BraidCone& b) { return a.order == b.order; }
};

/// The affine piece carried by one braid cone: gradient entries are the
/// chain increments g[w(i)] = F(S_{i+1}) - F(S_i), offset is F(empty).
template <typename Scalar>
struct PerConeAffine {
  BraidCone cone;
  VecX<Scalar> gradient;
  Scalar offset;

  Scalar eval(const VecX<Scalar>& x) const {
    Scalar acc = offset;
    for (Eigen::Index i = 0; i < gradient.size(); ++i) acc += gradient[i] * x[i];
    return acc;
  }
};

template <typename Scalar>
PerConeAffine<Scalar> affine_piece(const SetFunction<Scalar>& f, BraidCone cone) {
  const int n = f.ground_size();
  if (cone.dim() != n) throw std::invalid_argument("cone: dimension mismatch");
  VecX<Scalar> g = VecX<Scalar>::Constant(n, Scalar(0));
  Mask chain = 0;
  for (int i = 0; i < n; ++i) {
    const Mask next = chain | (Mask(1) << cone.order[i]);
    g[cone.order[i]] = f[next] - f[chain];
    chain = next;
  }
  return {std::move(cone), std::move(g), f[Mask(0)]};
}

/// Descending coordinate order with ties broken by smallest index first.
/// Any tie-compatible order yields the same chain-telescoped value, so the
/// break rule is observable only in which chain gets reported.
template <typename Scalar>
BraidCone sort_cone(const VecX<Scalar>& x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[b] < x[a]; });
  return BraidCone(std::move(order));
}

/// Chain-telescoped evaluation of the unique braid-compatible CPWL function
/// interpolating F on indicator vectors:
/// f(x) = F(empty) + sum_i x_{w(i)} (F(S_i) - F(S_{i-1})).
template <typename Scalar>
Scalar lovasz_eval(const SetFunction<Scalar>& f, const VecX<Scalar>& x) {
  if (x.size() != f.ground_size()) {
    throw std::invalid_argument("point: expected dimension " + std::to_string(f.ground_size()) +
                                ", got " + std::to_string(x.size()));
  }
  const BraidCone cone = sort_cone(x);
  Scalar acc = f[Mask(0)];
  Mask chain = 0;
  for (int i = 0; i < f.ground_size(); ++i) {
    const Mask next = chain | (Mask(1) << cone.order[i]);
    acc += x[cone.order[i]] * (f[next] - f[chain]);
    chain = next;
  }
  return acc;
}

/// Evaluate along an explicit chain order (test hook for tie-order
/// invariance; the order must sort x descending up to ties).
template <typename Scalar>
Scalar lovasz_eval_along(const SetFunction<Scalar>& f, const VecX<Scalar>& x,
                         const BraidCone& cone) {
  Scalar acc = f[Mask(0)];
  Mask chain = 0;
  for (int i = 0; i < f.ground_size(); ++i) {
    const Mask next = chain | (Mask(1) << cone.order[i]);
    acc += x[cone.order[i]] * (f[next] - f[chain]);
    chain = next;
  }
  return acc;
}

/// Braid-compatible PL function: evaluation everywhere via chain
/// telescoping, per-cone affine pieces cached on demand. The cache insert
/// is idempotent and mutex-guarded, so concurrent evaluation is safe.
template <typename Scalar>
class CompatiblePL {
 public:
  explicit CompatiblePL(SetFunction<Scalar> f)
      : f_(std::move(f)), cache_(std::make_shared<Cache>()) {}

  int dim() const { return f_.ground_size(); }
  const SetFunction<Scalar>& set_function() const { return f_; }

  Scalar eval(const VecX<Scalar>& x) const { return lovasz_eval(f_, x); }

  const PerConeAffine<Scalar>& piece(const BraidCone& cone) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->pieces.find(cone);
    if (it == cache_->pieces.end()) {
      it = cache_->pieces.emplace(cone, affine_piece(f_, cone)).first;
    }
    return it->second;
  }

  std::size_t cached_pieces() const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->pieces.size();
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<BraidCone, PerConeAffine<Scalar>> pieces;
  };

  SetFunction<Scalar> f_;
  std::shared_ptr<Cache> cache_;  // shared across copies; inserts are idempotent
};

struct FacetCertificate {
  bool passed = true;
  std::uint64_t cones_checked = 0;
  std::uint64_t facets_checked = 0;
  struct Failure {
    std::vector<int> order;  // cone permutation, 0-based
    int position;            // adjacent transposition at (position, position+1)
  };
  std::optional<Failure> failure;
};

inline constexpr int kFullFanCap = 8;  // n! cones materialize up to here

/// Symbolic continuity check across every adjacent-transposition facet:
/// the two affine pieces on cones w and w' = w.(i i+1) must agree on the
/// shared hyperplane x_{w(i)} = x_{w(i+1)}, i.e. equal offsets, equal
/// gradients off {a, b}, and equal gradient sums on {a, b}.
template <typename Scalar>
FacetCertificate check_facet_continuity(const SetFunction<Scalar>& f) {
  const int n = f.ground_size();
  if (n > kFullFanCap) {
    throw std::invalid_argument("facet certificate: n > " + std::to_string(kFullFanCap) +
                                " exceeds the full-fan cap");
  }
  FacetCertificate cert;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const PerConeAffine<Scalar> piece = affine_piece(f, BraidCone(perm));
    ++cert.cones_checked;
    for (int i = 0; i + 1 < n; ++i) {
      std::vector<int> neighbor = perm;
      std::swap(neighbor[i], neighbor[i + 1]);
      const PerConeAffine<Scalar> other = affine_piece(f, BraidCone(neighbor));
      ++cert.facets_checked;

      const int a = perm[i];
      const int b = perm[i + 1];
      bool ok = piece.offset == other.offset &&
                piece.gradient[a] + piece.gradient[b] == other.gradient[a] + other.gradient[b];
      for (int c = 0; ok && c < n; ++c) {
        if (c == a || c == b) continue;
        ok = piece.gradient[c] == other.gradient[c];
      }
      if (!ok) {
        cert.passed = false;
        cert.failure = FacetCertificate::Failure{perm, i};
        return cert;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cert;
}

template <typename Scalar>
struct BraidRealization {
  CompatiblePL<Scalar> pl;
  std::optional<FacetCertificate> certificate;  // full check runs for n <= 8
};

/// Builds the braid realization of F. All n! pieces are materialized and
/// facet-checked when n <= 8; beyond that the pieces stay lazy and no
/// certificate is produced.
template <typename Scalar>
BraidRealization<Scalar> realize_braid(const SetFunction<Scalar>& f) {
  BraidRealization<Scalar> out{CompatiblePL<Scalar>(f), std::nullopt};
  const int n = f.ground_size();
  if (n <= kFullFanCap) {
    out.certificate = check_facet_continuity(f);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      out.pl.piece(BraidCone(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// A pointwise-evaluable function handle. Compositions below are not
/// claimed to stay braid-compatible; that is what the probe is for.
template <typename Scalar>
struct SampledFn {
  int n = 0;
  std::function<Scalar(const VecX<Scalar>&)> fn;

  Scalar operator()(const VecX<Scalar>& x) const { return fn(x); }
};

template <typename Scalar>
SampledFn<Scalar> as_sampled(const CompatiblePL<Scalar>& pl) {
  return {pl.dim(), [pl](const VecX<Scalar>& x) { return pl.eval(x); }};
}

template <typename Scalar>
SampledFn<Scalar> compose_max(const SampledFn<Scalar>& f, const SampledFn<Scalar>& g) {
  if (f.n != g.n) throw std::invalid_argument("compose: dimension mismatch");
  auto ff = f.fn;
  auto gf = g.fn;
  return {f.n, [ff, gf](const VecX<Scalar>& x) {
            const Scalar a = ff(x);
            const Scalar b = gf(x);
            return a < b ? b : a;
          }};
}

template <typename Scalar>
SampledFn<Scalar> compose_affine(const Scalar& a, const Scalar& b, const SampledFn<Scalar>& f) {
  auto ff = f.fn;
  return {f.n, [a, b, ff](const VecX<Scalar>& x) { return a * ff(x) + b; }};
}

namespace detail {

/// Gaussian solve of A x = b; nullopt when singular. Exact scalars pick
/// the first nonzero pivot; floats pivot by magnitude with a small cutoff.
template <typename Scalar>
std::optional<VecX<Scalar>> solve_linear(MatX<Scalar> a, VecX<Scalar> b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    if constexpr (ScalarMode<Scalar>::is_exact) {
      for (Eigen::Index r = col; r < n; ++r) {
        if (!a(r, col).is_zero()) {
          pivot = r;
          break;
        }
      }
    } else {
      double best = 1e-12;
      for (Eigen::Index r = col; r < n; ++r) {
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          pivot = r;
        }
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (is_negligible(a(r, col), 0.0)) continue;
      const Scalar factor = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  VecX<Scalar> x = VecX<Scalar>::Constant(n, Scalar(0));
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    Scalar acc = b[r];
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

}  // namespace detail

template <typename Scalar>
struct ProbeReport {
  bool conforming = true;
  std::uint64_t seed = 0;
  int trials = 0;
  struct Witness {
    std::vector<int> order;            // cone permutation, 0-based
    std::vector<VecX<Scalar>> points;  // n+2 sampled points; last one is checked
    Scalar expected;
    Scalar got;
    int trial;
  };
  std::optional<Witness> witness;
};

/// Per-cone affineness probe. Each trial samples a braid cone, draws n+2
/// rational points in its open interior (strictly descending coordinates
/// over a common bounded denominator), fits the affine map from the first
/// n+1 points, and checks the last. Exact scalars compare exactly; floats
/// within 1e-9 relative.
template <typename Scalar>
ProbeReport<Scalar> compatibility_probe(const SampledFn<Scalar>& g, int trials,
                                        std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  const int n = g.n;
  ProbeReport<Scalar> report;
  report.seed = seed;
  report.trials = trials;
  Rng rng(seed);

  const Tolerance tol;
  for (int trial = 0; trial < trials; ++trial) {
    const std::vector<int> order = random_permutation(rng, n);

    for (int attempt = 0;; ++attempt) {
      std::vector<VecX<Scalar>> points;
      points.reserve(n + 2);
      for (int p = 0; p < n + 2; ++p) {
        const long den = rng_range(rng, 1, 8);
        long value = rng_range(rng, 1, 8 * long(n + 2));
        VecX<Scalar> x = VecX<Scalar>::Constant(n, Scalar(0));
        for (int i = 0; i < n; ++i) {
          x[order[i]] = make_scalar<Scalar>(value, den);
          value -= rng_range(rng, 1, 7);
        }
        points.push_back(std::move(x));
      }

      MatX<Scalar> a = MatX<Scalar>::Constant(n + 1, n + 1, Scalar(1));
      VecX<Scalar> b = VecX<Scalar>::Constant(n + 1, Scalar(0));
      for (int p = 0; p <= n; ++p) {
        for (int i = 0; i < n; ++i) a(p, i) = points[p][i];
        b[p] = g(points[p]);
      }
      const auto fit = detail::solve_linear<Scalar>(std::move(a), std::move(b));
      if (!fit) {
        if (attempt >= 64) {
          throw std::runtime_error("probe: could not sample affinely independent points");
        }
        continue;  // affinely dependent draw; resample
      }

      const VecX<Scalar>& probe_point = points[n + 1];
      Scalar expected = (*fit)[n];
      for (int i = 0; i < n; ++i) expected += (*fit)[i] * probe_point[i];
      const Scalar got = g(probe_point);

      double scale = 1.0;
      if constexpr (!ScalarMode<Scalar>::is_exact) {
        scale = std::max(1.0, std::abs(double(expected)));
      }
      if (!is_negligible(Scalar(got - expected), tol.threshold(scale))) {
        report.conforming = false;
        report.witness = typename ProbeReport<Scalar>::Witness{
            order, std::move(points), std::move(expected), std::move(got), trial};
        return report;
      }
      break;
    }
  }
  return report;
}

}  // namespace cpwlmat

#endif  // CPWLMAT_CPWL_HPP
