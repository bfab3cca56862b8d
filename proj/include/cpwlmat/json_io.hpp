#ifndef CPWLMAT_JSON_IO_HPP
#define CPWLMAT_JSON_IO_HPP

#include <json.hpp>

#include <string>
#include <variant>

#include "cpwlmat/constraints.hpp"
#include "cpwlmat/cpwl.hpp"
#include "cpwlmat/matroid.hpp"
#include "cpwlmat/net_analyze.hpp"
#include "cpwlmat/set_function.hpp"
#include "cpwlmat/structure.hpp"

namespace cpwlmat {

using Json = nlohmann::json;

/// Runtime-dispatched scalar backend for data arriving as JSON; the core
/// stays compile-time templated.
using AnySetFunction = std::variant<ExactSetFunction, FloatSetFunction>;

inline Json value_to_json(const Rational& v) { return Json(v.str()); }
inline Json value_to_json(double v) { return Json(v); }

template <typename Scalar>
Scalar value_from_json(const Json& j, const std::string& field);

template <>
Rational value_from_json<Rational>(const Json& j, const std::string& field);
template <>
double value_from_json<double>(const Json& j, const std::string& field);

/// `{"n": 3, "mode": "exact", "values": {"0": "0", ..., "7": "12"}}`;
/// keys are decimal bitmask strings, exactly 2^n of them. Exact values are
/// "p/q" strings, float64 values are JSON numbers.
AnySetFunction set_function_from_json(const Json& j);

template <typename Scalar>
Json set_function_to_json(const SetFunction<Scalar>& f) {
  Json values = Json::object();
  for (Mask s = 0; s < f.subset_count(); ++s) {
    values[std::to_string(s)] = value_to_json(f[s]);
  }
  return Json{{"n", f.ground_size()}, {"mode", ScalarMode<Scalar>::name}, {"values", values}};
}

/// Spectrum serialization mirrors the set-function schema and adds the
/// per-order norms; the inverse transform reads n/mode/values only.
template <typename Scalar>
Json spectrum_to_json(const MoebiusSpectrum<Scalar>& spec) {
  Json values = Json::object();
  for (Mask s = 0; s < spec.subset_count(); ++s) {
    values[std::to_string(s)] = value_to_json(spec[s]);
  }
  Json norms = Json::array();
  for (const auto& st : spec.order_norms()) {
    norms.push_back(Json{{"order", st.order},
                         {"max_abs", value_to_json(st.max_abs)},
                         {"sum_abs", value_to_json(st.sum_abs)}});
  }
  return Json{{"n", spec.ground_size()},
              {"mode", ScalarMode<Scalar>::name},
              {"values", values},
              {"order_norms", norms}};
}

/// `{"type": "uniform", "n": 4, "k": 2}` or
/// `{"type": "circuits", "n": 4, "circuits": [[1,2,3],[1,2,4]]}` (1-based).
Matroid matroid_from_json(const Json& j);
Json matroid_to_json(const Matroid& m);

using AnyLowOrderTable = std::variant<LowOrderTable<Rational>, LowOrderTable<double>>;

/// Same shape as a set function but with only the masks of size <= k.
AnyLowOrderTable low_order_table_from_json(const Json& j, int k);

using AnyBasisCoefficients = std::variant<BasisCoefficients<Rational>, BasisCoefficients<double>>;

/// `{"matroid": {...}, "mode": "exact", "coeffs": {"<mask>": "p/q"}}`;
/// missing coefficients read as zero, mode defaults to exact.
AnyBasisCoefficients basis_coefficients_from_json(const Json& j);

template <typename Scalar>
Json basis_coefficients_to_json(const BasisCoefficients<Scalar>& c) {
  Json coeffs = Json::object();
  for (const auto& [t, v] : c.coeffs()) coeffs[std::to_string(t)] = value_to_json(v);
  return Json{{"matroid", matroid_to_json(c.matroid())},
              {"mode", ScalarMode<Scalar>::name},
              {"coeffs", coeffs}};
}

/// `{"n": 3, "layers": [{"w": [[...], ...], "b": [...], "act": "relu"}]}`.
MlpSpec mlp_from_json(const Json& j);

Json dimension_report_to_json(const DimensionReport& report);
Json axiom_report_to_json(const CircuitAxiomReport& report);
Json expressivity_report_to_json(const ExpressivityReport& report);

template <typename Scalar>
Json membership_verdict_to_json(const MembershipVerdict<Scalar>& verdict) {
  Json violations = Json::array();
  for (const auto& [mask, residual] : verdict.violations) {
    violations.push_back(Json{{"mask", mask},
                              {"set", mask_to_elements(mask)},
                              {"residual", value_to_json(residual)}});
  }
  return Json{{"member", verdict.member}, {"violations", violations}};
}

template <typename Scalar>
Json probe_report_to_json(const ProbeReport<Scalar>& report) {
  Json j{{"conforming", report.conforming},
         {"seed", report.seed},
         {"trials", report.trials},
         {"witness", nullptr}};
  if (report.witness) {
    Json cone = Json::array();
    for (int i : report.witness->order) cone.push_back(i + 1);
    Json points = Json::array();
    for (const auto& p : report.witness->points) {
      Json point = Json::array();
      for (Eigen::Index i = 0; i < p.size(); ++i) point.push_back(value_to_json(p[i]));
      points.push_back(point);
    }
    j["witness"] = Json{{"cone", cone},
                        {"points", points},
                        {"expected", value_to_json(report.witness->expected)},
                        {"got", value_to_json(report.witness->got)},
                        {"trial", report.witness->trial}};
  }
  return j;
}

/// Canonical text form used everywhere the toolkit emits JSON: two-space
/// indent, keys in nlohmann's sorted order, trailing newline.
std::string canonical_json_text(const Json& j);

}  // namespace cpwlmat

#endif  // CPWLMAT_JSON_IO_HPP
