#include "cpwlmat/json_io.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpwlmat {

namespace {

const Json& require_field(const Json& j, const std::string& field) {
  if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
  const auto it = j.find(field);
  if (it == j.end()) throw std::invalid_argument(field + ": missing field");
  return *it;
}

int require_int(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_number_integer()) throw std::invalid_argument(field + ": expected an integer");
  return v.get<int>();
}

std::string require_string(const Json& j, const std::string& field) {
  const Json& v = require_field(j, field);
  if (!v.is_string()) throw std::invalid_argument(field + ": expected a string");
  return v.get<std::string>();
}

Mask parse_mask_key(const std::string& key, Mask limit, const std::string& field) {
  std::size_t consumed = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(key, &consumed, 10);
  } catch (const std::exception&) {
    throw std::invalid_argument(field + ": key '" + key + "' is not a bitmask");
  }
  if (consumed != key.size() || value >= limit) {
    throw std::invalid_argument(field + ": key '" + key + "' is not a bitmask below " +
                                std::to_string(limit));
  }
  return Mask(value);
}

template <typename Scalar>
VecX<Scalar> values_from_json(const Json& values, int n, const std::string& field) {
  if (!values.is_object()) throw std::invalid_argument(field + ": expected an object");
  const Mask size = Mask(1) << n;
  VecX<Scalar> out = VecX<Scalar>::Constant(size, Scalar(0));
  std::vector<bool> seen(size, false);
  for (const auto& [key, value] : values.items()) {
    const Mask mask = parse_mask_key(key, size, field);
    seen[mask] = true;
    out[mask] = value_from_json<Scalar>(value, field + "[" + key + "]");
  }
  for (Mask s = 0; s < size; ++s) {
    if (!seen[s]) {
      throw std::invalid_argument(field + ": missing key '" + std::to_string(s) + "'");
    }
  }
  return out;
}

template <typename Scalar>
std::vector<std::pair<Mask, Scalar>> sparse_values_from_json(const Json& values, int n,
                                                             const std::string& field) {
  if (!values.is_object()) throw std::invalid_argument(field + ": expected an object");
  const Mask size = Mask(1) << n;
  std::vector<std::pair<Mask, Scalar>> out;
  out.reserve(values.size());
  for (const auto& [key, value] : values.items()) {
    const Mask mask = parse_mask_key(key, size, field);
    out.emplace_back(mask, value_from_json<Scalar>(value, field + "[" + key + "]"));
  }
  return out;
}

}  // namespace

template <>
Rational value_from_json<Rational>(const Json& j, const std::string& field) {
  if (!j.is_string()) {
    throw std::invalid_argument(field + ": exact values must be \"p/q\" strings");
  }
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw std::invalid_argument(field + ": " + e.what());
  }
}

template <>
double value_from_json<double>(const Json& j, const std::string& field) {
  if (!j.is_number()) {
    throw std::invalid_argument(field + ": float64 values must be JSON numbers");
  }
  return j.get<double>();
}

AnySetFunction set_function_from_json(const Json& j) {
  const int n = require_int(j, "n");
  check_ground_size(n);
  const std::string mode = require_string(j, "mode");
  const Json& values = require_field(j, "values");
  if (mode == ScalarMode<Rational>::name) {
    return ExactSetFunction(n, values_from_json<Rational>(values, n, "values"));
  }
  if (mode == ScalarMode<double>::name) {
    return FloatSetFunction(n, values_from_json<double>(values, n, "values"));
  }
  throw std::invalid_argument("mode: expected \"exact\" or \"float64\", got \"" + mode + "\"");
}

Matroid matroid_from_json(const Json& j) {
  const std::string type = require_string(j, "type");
  const int n = require_int(j, "n");
  if (type == "uniform") {
    return Matroid::uniform(n, require_int(j, "k"));
  }
  if (type == "circuits") {
    const Json& circuits = require_field(j, "circuits");
    if (!circuits.is_array()) throw std::invalid_argument("circuits: expected an array");
    std::vector<Mask> masks;
    masks.reserve(circuits.size());
    for (const Json& circuit : circuits) {
      if (!circuit.is_array()) {
        throw std::invalid_argument("circuits: expected arrays of 1-based elements");
      }
      std::vector<int> elems;
      for (const Json& e : circuit) {
        if (!e.is_number_integer()) {
          throw std::invalid_argument("circuits: elements must be integers");
        }
        elems.push_back(e.get<int>());
      }
      masks.push_back(elements_to_mask(elems, n));
    }
    return Matroid::from_circuits(n, std::move(masks));
  }
  throw std::invalid_argument("type: expected \"uniform\" or \"circuits\", got \"" + type + "\"");
}

Json matroid_to_json(const Matroid& m) {
  if (m.is_uniform()) {
    return Json{{"type", "uniform"}, {"n", m.ground_size()}, {"k", *m.uniform_rank()}};
  }
  Json circuits = Json::array();
  for (Mask c : m.circuits()) circuits.push_back(mask_to_elements(c));
  return Json{{"type", "circuits"}, {"n", m.ground_size()}, {"circuits", circuits}};
}

AnyLowOrderTable low_order_table_from_json(const Json& j, int k) {
  const int n = require_int(j, "n");
  check_ground_size(n);
  const std::string mode = require_string(j, "mode");
  const Json& values = require_field(j, "values");
  if (mode == ScalarMode<Rational>::name) {
    return LowOrderTable<Rational>(n, k, sparse_values_from_json<Rational>(values, n, "values"));
  }
  if (mode == ScalarMode<double>::name) {
    return LowOrderTable<double>(n, k, sparse_values_from_json<double>(values, n, "values"));
  }
  throw std::invalid_argument("mode: expected \"exact\" or \"float64\", got \"" + mode + "\"");
}

AnyBasisCoefficients basis_coefficients_from_json(const Json& j) {
  Matroid matroid = matroid_from_json(require_field(j, "matroid"));
  const Json& coeffs = require_field(j, "coeffs");
  std::string mode = ScalarMode<Rational>::name;
  if (j.contains("mode")) mode = require_string(j, "mode");
  const int n = matroid.ground_size();
  if (mode == ScalarMode<Rational>::name) {
    return BasisCoefficients<Rational>(std::move(matroid),
                                       sparse_values_from_json<Rational>(coeffs, n, "coeffs"));
  }
  if (mode == ScalarMode<double>::name) {
    return BasisCoefficients<double>(std::move(matroid),
                                     sparse_values_from_json<double>(coeffs, n, "coeffs"));
  }
  throw std::invalid_argument("mode: expected \"exact\" or \"float64\", got \"" + mode + "\"");
}

MlpSpec mlp_from_json(const Json& j) {
  MlpSpec net;
  net.input_dim = require_int(j, "n");
  const Json& layers = require_field(j, "layers");
  if (!layers.is_array()) throw std::invalid_argument("layers: expected an array");
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const Json& layer = layers[li];
    const std::string where = "layers[" + std::to_string(li) + "]";
    const Json& w = require_field(layer, "w");
    if (!w.is_array() || w.empty()) throw std::invalid_argument(where + ".w: expected rows");
    const std::size_t rows = w.size();
    const std::size_t cols = w[0].is_array() ? w[0].size() : 0;
    if (cols == 0) throw std::invalid_argument(where + ".w: expected nonempty rows");
    Eigen::MatrixXd weights(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!w[r].is_array() || w[r].size() != cols) {
        throw std::invalid_argument(where + ".w: ragged rows");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (!w[r][c].is_number()) throw std::invalid_argument(where + ".w: expected numbers");
        weights(Eigen::Index(r), Eigen::Index(c)) = w[r][c].get<double>();
      }
    }
    const Json& b = require_field(layer, "b");
    if (!b.is_array() || b.size() != rows) {
      throw std::invalid_argument(where + ".b: expected " + std::to_string(rows) + " entries");
    }
    Eigen::VectorXd bias(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!b[r].is_number()) throw std::invalid_argument(where + ".b: expected numbers");
      bias[Eigen::Index(r)] = b[r].get<double>();
    }
    const std::string act = require_string(layer, "act");
    Activation activation;
    if (act == "relu") {
      activation = Activation::kRelu;
    } else if (act == "identity") {
      activation = Activation::kIdentity;
    } else {
      throw std::invalid_argument(where + ".act: expected \"relu\" or \"identity\", got \"" +
                                  act + "\"");
    }
    net.layers.push_back({std::move(weights), std::move(bias), activation});
  }
  net.validate();
  return net;
}

Json dimension_report_to_json(const DimensionReport& report) {
  Json j{{"n", report.n},
         {"circuit_count", report.circuit_count},
         {"rank_T", report.rank_t},
         {"kernel_dim", report.kernel_dim},
         {"independent_count", report.independent_count},
         {"discrepancy", report.discrepancy}};
  if (report.k) j["k"] = *report.k;
  return j;
}

Json axiom_report_to_json(const CircuitAxiomReport& report) {
  Json j{{"antichain", report.antichain},
         {"elimination", report.elimination},
         {"antichain_witness", nullptr},
         {"elimination_witness", nullptr}};
  if (report.antichain_witness) {
    j["antichain_witness"] = Json{{"contained", mask_to_elements(report.antichain_witness->first)},
                                  {"container", mask_to_elements(report.antichain_witness->second)}};
  }
  if (report.elimination_witness) {
    j["elimination_witness"] = Json{{"c1", mask_to_elements(report.elimination_witness->c1)},
                                    {"c2", mask_to_elements(report.elimination_witness->c2)},
                                    {"element", report.elimination_witness->element}};
  }
  return j;
}

Json expressivity_report_to_json(const ExpressivityReport& report) {
  Json spectrum = Json::array();
  for (const auto& st : report.spectrum) {
    spectrum.push_back(
        Json{{"order", st.order}, {"max_abs", st.max_abs}, {"sum_abs", st.sum_abs}});
  }
  Json violations = Json::array();
  for (const auto& [mask, v] : report.violations) {
    violations.push_back(Json{{"mask", mask}, {"set", mask_to_elements(mask)}, {"moebius", v}});
  }
  return Json{{"n", report.n},
              {"k", report.k},
              {"tol_threshold", report.tol_threshold},
              {"max_order", report.max_order},
              {"conforming", report.conforming},
              {"spectrum", spectrum},
              {"violations", violations}};
}

std::string canonical_json_text(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cpwlmat
