// Command-line entry point: every subcommand reads/writes JSON so runs are
// reproducible and diffable. Inputs accept either a file path or inline
// JSON (anything starting with '{').

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cpwlmat/json_io.hpp"

namespace {

using namespace cpwlmat;

Json load_json(const std::string& arg, const std::string& what) {
  std::string text;
  if (!arg.empty() && arg.front() == '{') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument(what + ": cannot open file '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(what + ": invalid JSON (" + e.what() + ")");
  }
}

void emit(const Json& j, const std::string& out_path) {
  const std::string text = canonical_json_text(j);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("out: cannot open file '" + out_path + "'");
    out << text;
  }
}

void emit_line(const std::string& line, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << line << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("out: cannot open file '" + out_path + "'");
    out << line << "\n";
  }
}

template <typename Scalar>
VecX<Scalar> parse_point(const std::string& text, int n);

template <>
VecX<Rational> parse_point<Rational>(const std::string& text, int n) {
  std::vector<Rational> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) coords.push_back(Rational::parse(item));
  if (int(coords.size()) != n) {
    throw std::invalid_argument("point: expected " + std::to_string(n) + " coordinates, got " +
                                std::to_string(coords.size()));
  }
  VecX<Rational> x(n);
  for (int i = 0; i < n; ++i) x[i] = coords[std::size_t(i)];
  return x;
}

template <>
VecX<double> parse_point<double>(const std::string& text, int n) {
  const VecX<Rational> exact = parse_point<Rational>(text, n);
  VecX<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = exact[i].to_double();
  return x;
}

MembershipModel parse_model(const std::string& model) {
  if (model == "circuit-only") return MembershipModel::kCircuitOnly;
  if (model == "moebius-support") return MembershipModel::kMoebiusSupport;
  throw std::invalid_argument("model: expected \"circuit-only\" or \"moebius-support\", got \"" +
                              model + "\"");
}

// Exact mode forbids a nonzero tolerance; float64 defaults to 1e-9 relative.
template <typename Scalar>
double membership_threshold(const SetFunction<Scalar>& f, bool tol_given, double rel_tol) {
  if constexpr (ScalarMode<Scalar>::is_exact) {
    if (tol_given && rel_tol != 0.0) {
      throw std::invalid_argument("tol: must be 0 in exact mode, got " + std::to_string(rel_tol));
    }
    return 0.0;
  } else {
    Tolerance tol;
    if (tol_given) tol.rel = rel_tol;
    return tol.threshold(f.max_abs());
  }
}

int run_transform(const std::string& fn_arg, bool inverse, const std::string& out) {
  const AnySetFunction any = set_function_from_json(load_json(fn_arg, "fn"));
  std::visit(
      [&](const auto& f) {
        using Scalar = std::decay_t<decltype(f[Mask(0)])>;
        if (inverse) {
          const MoebiusSpectrum<Scalar> spec(f.ground_size(), f.values());
          emit(set_function_to_json(zeta_transform(spec)), out);
        } else {
          emit(spectrum_to_json(moebius_transform(f)), out);
        }
      },
      any);
  return 0;
}

int run_check(const std::string& fn_arg, const std::string& matroid_arg,
              const std::string& model_arg, bool tol_given, double rel_tol, bool strict,
              const std::string& out) {
  const AnySetFunction any = set_function_from_json(load_json(fn_arg, "fn"));
  const Matroid matroid = matroid_from_json(load_json(matroid_arg, "matroid"));
  const MembershipModel model = parse_model(model_arg);
  bool member = true;
  std::visit(
      [&](const auto& f) {
        const double threshold = membership_threshold(f, tol_given, rel_tol);
        const auto verdict = membership(f, matroid, model, threshold);
        member = verdict.member;
        Json j = membership_verdict_to_json(verdict);
        j["model"] = model_arg;
        emit(j, out);
      },
      any);
  return (strict && !member) ? 1 : 0;
}

int run_dim(const std::string& matroid_arg, const std::string& model_arg,
            const std::string& out) {
  const Matroid matroid = matroid_from_json(load_json(matroid_arg, "matroid"));
  parse_model(model_arg);
  const DimensionReport report = kernel_dimension(matroid);
  Json j = dimension_report_to_json(report);
  j["model"] = model_arg;
  j["dim"] = (model_arg == "circuit-only") ? report.kernel_dim : report.independent_count;
  emit(j, out);
  return 0;
}

int run_basis(const std::string& fn_arg, const std::string& coeffs_arg,
              const std::string& matroid_arg, const std::string& out) {
  if (!coeffs_arg.empty()) {
    const AnyBasisCoefficients any = basis_coefficients_from_json(load_json(coeffs_arg, "coeffs"));
    std::visit([&](const auto& c) { emit(set_function_to_json(reconstruct(c)), out); }, any);
    return 0;
  }
  if (fn_arg.empty()) throw std::invalid_argument("fn: required unless --coeffs is given");
  const AnySetFunction any = set_function_from_json(load_json(fn_arg, "fn"));
  const Matroid matroid = matroid_from_json(load_json(matroid_arg, "matroid"));
  std::visit(
      [&](const auto& f) {
        const auto [coeffs, residual] = decompose(f, matroid);
        Json j = basis_coefficients_to_json(coeffs);
        Json res = Json::array();
        for (const auto& [mask, v] : residual) {
          res.push_back(Json{{"mask", mask}, {"set", mask_to_elements(mask)},
                             {"moebius", value_to_json(v)}});
        }
        j["residual"] = res;
        emit(j, out);
      },
      any);
  return 0;
}

int run_reduce(const std::string& table_arg, int k, const std::string& out) {
  const Json j = load_json(table_arg, "table");
  const AnyLowOrderTable any = low_order_table_from_json(j, k);
  std::visit(
      [&](const auto& table) {
        const UniformMatroid m(table.ground_size(), k);
        emit(set_function_to_json(extend_from_low_order(table, m)), out);
      },
      any);
  return 0;
}

int run_lovasz_eval(const std::string& fn_arg, const std::string& point_arg,
                    const std::string& out) {
  const AnySetFunction any = set_function_from_json(load_json(fn_arg, "fn"));
  std::visit(
      [&](const auto& f) {
        using Scalar = std::decay_t<decltype(f[Mask(0)])>;
        const VecX<Scalar> x = parse_point<Scalar>(point_arg, f.ground_size());
        const Scalar value = lovasz_eval(f, x);
        if constexpr (ScalarMode<Scalar>::is_exact) {
          emit_line(value.str(), out);
        } else {
          std::ostringstream os;
          os << value;
          emit_line(os.str(), out);
        }
      },
      any);
  return 0;
}

int run_probe(const std::string& fn_arg, const std::string& max_with_arg, int trials,
              std::uint64_t seed, bool strict, const std::string& out) {
  const AnySetFunction any = set_function_from_json(load_json(fn_arg, "fn"));
  bool conforming = true;
  std::visit(
      [&](const auto& f) {
        using Scalar = std::decay_t<decltype(f[Mask(0)])>;
        SampledFn<Scalar> target = as_sampled(CompatiblePL<Scalar>(f));
        if (!max_with_arg.empty()) {
          const AnySetFunction other = set_function_from_json(load_json(max_with_arg, "max-with"));
          const auto* g = std::get_if<SetFunction<Scalar>>(&other);
          if (g == nullptr) throw std::invalid_argument("max-with: scalar mode mismatch with fn");
          if (g->ground_size() != f.ground_size()) {
            throw std::invalid_argument("max-with: ground size mismatch with fn");
          }
          target = compose_max(target, as_sampled(CompatiblePL<Scalar>(*g)));
        }
        const ProbeReport<Scalar> report = compatibility_probe(target, trials, seed);
        conforming = report.conforming;
        emit(probe_report_to_json(report), out);
      },
      any);
  return (strict && !conforming) ? 1 : 0;
}

int run_net_analyze(const std::string& net_arg, int k, double rel_tol, const std::string& out) {
  const MlpSpec net = mlp_from_json(load_json(net_arg, "net"));
  Tolerance tol;
  tol.rel = rel_tol;
  emit(expressivity_report_to_json(analyze_network(net, k, tol)), out);
  return 0;
}

int run_matroid_info(const std::string& matroid_arg, const std::string& out) {
  const Matroid matroid = matroid_from_json(load_json(matroid_arg, "matroid"));
  Json j = matroid_to_json(matroid);
  j["circuit_count"] = matroid.circuit_count();
  j["rank"] = matroid.rank();
  j["independent_count"] = matroid.count_independent();
  if (matroid.ground_size() <= 12) {
    j["axioms"] = axiom_report_to_json(validate_circuit_axioms(matroid));
  }
  emit(j, out);
  return 0;
}

int run_witness(int n, int k, const std::string& out) {
  const auto [f, certificate] = separation_witness(n, k);
  const MoebiusSpectrum<Rational> spec = moebius_transform(f);
  emit(Json{{"n", n},
            {"k", k},
            {"set_function", set_function_to_json(f)},
            {"certificate_mask", certificate},
            {"certificate_set", mask_to_elements(certificate)},
            {"moebius_value", spec[certificate].str()}},
       out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpwlmat: circuit-constrained set functions on the Boolean lattice"};
  app.require_subcommand(1);

  std::string fn_arg;
  std::string matroid_arg;
  std::string table_arg;
  std::string net_arg;
  std::string coeffs_arg;
  std::string max_with_arg;
  std::string point_arg;
  std::string model_arg = "moebius-support";
  std::string out_path;
  double rel_tol = 0.0;
  bool inverse = false;
  bool strict = false;
  int k = 2;
  int n = 3;
  int trials = 64;
  std::uint64_t seed = 0;

  auto* transform = app.add_subcommand("transform", "Moebius transform of a set function");
  transform->add_option("--fn", fn_arg, "set function (path or inline JSON)")->required();
  transform->add_flag("--inverse", inverse, "apply the zeta (inverse) transform");
  transform->add_option("--out", out_path, "output path (default stdout)");

  auto* check = app.add_subcommand("check", "membership of F in the circuit-constrained space");
  check->add_option("--fn", fn_arg)->required();
  check->add_option("--matroid", matroid_arg)->required();
  check->add_option("--model", model_arg, "circuit-only | moebius-support");
  check->add_option("--tol", rel_tol, "relative tolerance (float64 mode only)");
  check->add_flag("--strict", strict, "exit 1 when the verdict is negative");
  check->add_option("--out", out_path);

  auto* dim = app.add_subcommand("dim", "kernel dimension vs. independent-set count");
  dim->add_option("--matroid", matroid_arg)->required();
  dim->add_option("--model", model_arg);
  dim->add_option("--out", out_path);

  auto* basis = app.add_subcommand("basis", "canonical-basis coordinates (or --coeffs to rebuild)");
  basis->add_option("--fn", fn_arg);
  basis->add_option("--matroid", matroid_arg);
  basis->add_option("--coeffs", coeffs_arg, "basis coefficients JSON; reconstructs F");
  basis->add_option("--out", out_path);

  auto* reduce = app.add_subcommand("reduce", "extend a low-order table to the full lattice");
  reduce->add_option("--table", table_arg)->required();
  reduce->add_option("--k", k, "table order / matroid rank")->required();
  reduce->add_option("--out", out_path);

  auto* lovasz = app.add_subcommand("lovasz-eval", "evaluate the braid-compatible extension");
  lovasz->add_option("--fn", fn_arg)->required();
  lovasz->add_option("--point", point_arg, "comma-separated rationals")->required();
  lovasz->add_option("--out", out_path);

  auto* probe = app.add_subcommand("probe", "per-cone affineness probe of a PL function");
  probe->add_option("--fn", fn_arg)->required();
  probe->add_option("--max-with", max_with_arg, "probe max(lovasz(fn), lovasz(this)) instead");
  probe->add_option("--trials", trials);
  probe->add_option("--seed", seed);
  probe->add_flag("--strict", strict, "exit 1 when non-conforming");
  probe->add_option("--out", out_path);

  auto* net = app.add_subcommand("net-analyze", "interaction spectrum of a ReLU network");
  net->add_option("--net", net_arg)->required();
  net->add_option("--k", k, "conformance order")->required();
  net->add_option("--tol", rel_tol, "relative tolerance")->default_val(1e-9);
  net->add_option("--out", out_path);

  auto* info = app.add_subcommand("matroid-info", "circuits, counts, and axiom diagnostics");
  info->add_option("--matroid", matroid_arg)->required();
  info->add_option("--out", out_path);

  auto* witness = app.add_subcommand("witness", "separation witness outside the rank-k space");
  witness->add_option("--n", n)->required();
  witness->add_option("--k", k)->required();
  witness->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (transform->parsed()) return run_transform(fn_arg, inverse, out_path);
    if (check->parsed()) return run_check(fn_arg, matroid_arg, model_arg, rel_tol, strict, out_path);
    if (dim->parsed()) return run_dim(matroid_arg, model_arg, out_path);
    if (basis->parsed()) return run_basis(fn_arg, coeffs_arg, matroid_arg, out_path);
    if (reduce->parsed()) return run_reduce(table_arg, k, out_path);
    if (lovasz->parsed()) return run_lovasz_eval(fn_arg, point_arg, out_path);
    if (probe->parsed()) return run_probe(fn_arg, max_with_arg, trials, seed, strict, out_path);
    if (net->parsed()) return run_net_analyze(net_arg, k, rel_tol, out_path);
    if (info->parsed()) return run_matroid_info(matroid_arg, out_path);
    if (witness->parsed()) return run_witness(n, k, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
