#ifndef CPWLMAT_NET_ANALYZE_HPP
#define CPWLMAT_NET_ANALYZE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpwlmat/constraints.hpp"
#include "cpwlmat/masks.hpp"
#include "cpwlmat/matroid.hpp"
#include "cpwlmat/set_function.hpp"

namespace cpwlmat {

enum class Activation { kRelu, kIdentity };

struct MlpLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::kRelu;
};

/// Feedforward ReLU network with a single scalar output.
struct MlpSpec {
  int input_dim = 0;
  std::vector<MlpLayer> layers;

  void validate() const {
    check_ground_size(input_dim);
    if (layers.empty()) throw std::invalid_argument("layers: network has no layers");
    Eigen::Index in = input_dim;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const MlpLayer& layer = layers[i];
      if (layer.weights.cols() != in) {
        throw std::invalid_argument("layers[" + std::to_string(i) + "].w: expected " +
                                    std::to_string(in) + " columns, got " +
                                    std::to_string(layer.weights.cols()));
      }
      if (layer.bias.size() != layer.weights.rows()) {
        throw std::invalid_argument("layers[" + std::to_string(i) + "].b: expected " +
                                    std::to_string(layer.weights.rows()) + " entries, got " +
                                    std::to_string(layer.bias.size()));
      }
      if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
        throw std::invalid_argument("layers[" + std::to_string(i) + "]: non-finite entry");
      }
      in = layer.weights.rows();
    }
    if (in != 1) {
      throw std::invalid_argument("layers: final layer must output one scalar, got " +
                                  std::to_string(in));
    }
  }
};

/// Standard forward pass; ReLU is the componentwise max with zero.
inline double mlp_eval(const MlpSpec& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim) {
    throw std::invalid_argument("point: expected dimension " + std::to_string(net.input_dim) +
                                ", got " + std::to_string(x.size()));
  }
  Eigen::VectorXd h = x;
  for (const MlpLayer& layer : net.layers) {
    h = layer.weights * h + layer.bias;
    if (layer.activation == Activation::kRelu) h = h.cwiseMax(0.0);
  }
  return h[0];
}

/// F(S) = net(1_S) for every subset.
inline FloatSetFunction sample_on_indicators(const MlpSpec& net) {
  net.validate();
  const int n = net.input_dim;
  VecX<double> values = VecX<double>::Zero(Mask(1) << n);
  Eigen::VectorXd x(n);
  for (Mask s = 0; s < Mask(1) << n; ++s) {
    for (int i = 0; i < n; ++i) x[i] = (s & (Mask(1) << i)) ? 1.0 : 0.0;
    values[s] = mlp_eval(net, x);
  }
  return FloatSetFunction(n, std::move(values));
}

struct ExpressivityReport {
  int n = 0;
  int k = 0;
  double tol_threshold = 0.0;
  std::vector<OrderStats<double>> spectrum;  // per-order max-abs / sum-abs of Fhat
  int max_order = -1;
  bool conforming = false;
  std::vector<std::pair<Mask, double>> violations;  // worst offenders, |Fhat| descending
};

inline constexpr std::size_t kMaxReportedViolations = 32;

/// Samples the network on indicator vectors and tests the spectral
/// consequence of rank-k conformance: Fhat must vanish (within tolerance)
/// on every subset of size > k. Conforming reports always have
/// max_order <= k.
inline ExpressivityReport analyze_network(const MlpSpec& net, int k,
                                          const Tolerance& tol = Tolerance{}) {
  const FloatSetFunction f = sample_on_indicators(net);
  const int n = f.ground_size();
  if (k < 0 || k > n) {
    throw std::invalid_argument("k: order " + std::to_string(k) + " outside [0, " +
                                std::to_string(n) + "]");
  }
  const MoebiusSpectrum<double> spec = moebius_transform(f);

  ExpressivityReport report;
  report.n = n;
  report.k = k;
  report.tol_threshold = tol.threshold(f.max_abs());
  report.spectrum = spec.order_norms();
  report.max_order = spec.max_interaction_order(report.tol_threshold);
  report.conforming = report.max_order <= k;

  for (Mask s = 0; s < f.subset_count(); ++s) {
    if (popcount(s) > k && !is_negligible(spec[s], report.tol_threshold)) {
      report.violations.emplace_back(s, spec[s]);
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const auto& a, const auto& b) {
                     return std::abs(a.second) > std::abs(b.second);
                   });
  if (report.violations.size() > kMaxReportedViolations) {
    report.violations.resize(kMaxReportedViolations);
  }
  return report;
}

/// A set function outside the rank-k space for every k < n: the indicator
/// of the full ground set, whose Moebius transform is the unit vector at
/// [n]. Errors when k >= n, where no separation exists.
inline std::pair<ExactSetFunction, Mask> separation_witness(int n, int k) {
  check_ground_size(n);
  if (k >= n) {
    throw std::invalid_argument("k: separation requires k < n, got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n));
  }
  if (k < 0) throw std::invalid_argument("k: must be nonnegative");
  ExactSetFunction f(n);
  const Mask full = full_mask(n);
  f[full] = Rational(1);
  return {std::move(f), full};
}

}  // namespace cpwlmat

#endif  // CPWLMAT_NET_ANALYZE_HPP
