// Command-line front end: classification, Clebsch-Gordan decomposition,
// the identity verification battery, ladder-operator reports, and the
// Wigner-Eckart round trip, all with machine-readable output.
//
// Exit codes: 0 success, 1 mathematical failure (non-decomposable product,
// degenerate normalization, failed verification), 2 usage error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentzcg/coupling.hpp"
#include "lorentzcg/repr.hpp"
#include "lorentzcg/serialize.hpp"
#include "lorentzcg/tensorop.hpp"
#include "lorentzcg/verify.hpp"

using nlohmann::json;
using namespace lorentzcg;

namespace {

constexpr int kSchemaVersion = 1;

struct CommonOptions {
  std::string out_path; // empty = stdout
  bool csv = false;
  int threads = 1;
  std::uint64_t seed = 20250810;
  std::optional<double> tolerance;
};

void emit(const CommonOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
  out << text << '\n';
}

void emit_json(const CommonOptions& opts, json j) {
  j["schema"] = kSchemaVersion;
  emit(opts, j.dump(2));
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_finite(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
  return v;
}

std::pair<double, double> parse_complex_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_finite(s), 0.0};
  return {parse_finite(s.substr(0, comma)), parse_finite(s.substr(comma + 1))};
}

int env_threads() {
  if (const char* v = std::getenv("LORENTZCG_THREADS")) return std::max(1, std::atoi(v));
  return 1;
}

std::optional<double> env_tolerance() {
  if (const char* v = std::getenv("LORENTZCG_TOL")) return std::atof(v);
  return std::nullopt;
}

json error_json(const std::string& what) {
  return json{{"schema", kSchemaVersion}, {"error", what}};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"representation-theory desk calculator for the Lorentz group"};
  app.require_subcommand(1);

  CommonOptions common;
  common.threads = env_threads();
  common.tolerance = env_tolerance();

  std::string rho_arg = "0,0";
  int lambda_x2 = 0, gamma_x2 = 1, jmax_x2 = -1, jcut_x2 = -1, nu_x2 = 0;
  std::string A_arg = "1";
  double tolerance_flag = -1.0;

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--out", common.out_path, "write output to a file instead of stdout");
    cmd->add_option("--threads", common.threads, "worker threads for per-J block work");
    cmd->add_option("--seed", common.seed, "seed for every random sample in the run");
    cmd->add_option("--tolerance", tolerance_flag, "override every check tolerance");
    if (with_format) {
      cmd->add_flag("--csv", common.csv, "CSV output (lossy: flat rows, no inverse table)");
      cmd->add_flag("--json", "JSON output (default)");
    }
  };

  auto* classify_cmd = app.add_subcommand("classify", "classify a module label");
  classify_cmd->add_option("--lambda-x2", lambda_x2, "doubled lambda")->required();
  classify_cmd->add_option("--rho", rho_arg, "rho as RE,IM")->required();
  add_common(classify_cmd, false);

  auto* decompose_cmd =
      app.add_subcommand("decompose", "Clebsch-Gordan decomposition of a finite (x) infinite product");
  decompose_cmd->add_option("--lambda-x2", lambda_x2, "doubled lambda")->required();
  decompose_cmd->add_option("--rho", rho_arg, "rho as RE,IM")->required();
  decompose_cmd->add_option("--gamma-x2", gamma_x2, "doubled gamma of the finite factor")->required();
  decompose_cmd->add_option("--A", A_arg, "+1 for right, -1 for left finite module")->required();
  decompose_cmd->add_option("--jmax-x2", jmax_x2, "doubled top J of the emitted table")->required();
  add_common(decompose_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the full identity battery");
  add_common(verify_cmd, false);

  auto* js_cmd = app.add_subcommand("js", "ladder operator matrix elements and residuals");
  js_cmd->add_option("--lambda-x2", lambda_x2, "doubled lambda")->required();
  js_cmd->add_option("--rho", rho_arg, "rho as RE,IM")->required();
  js_cmd->add_option("--A", A_arg, "+1, -1, or 'both'")->required();
  js_cmd->add_option("--jcut-x2", jcut_x2, "doubled truncation level")->required();
  add_common(js_cmd, false);

  auto* we_cmd = app.add_subcommand("we-check", "Wigner-Eckart projection/reduction round trip");
  we_cmd->add_option("--lambda-x2", lambda_x2, "doubled lambda")->required();
  we_cmd->add_option("--rho", rho_arg, "rho as RE,IM")->required();
  we_cmd->add_option("--gamma-x2", gamma_x2, "doubled gamma")->required();
  we_cmd->add_option("--A", A_arg, "+1 or -1")->required();
  we_cmd->add_option("--nu-x2", nu_x2, "doubled nu selecting the target pair (default +gamma)");
  we_cmd->add_option("--jcut-x2", jcut_x2, "doubled truncation level")->required();
  add_common(we_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (tolerance_flag != -1.0) {
      if (!(tolerance_flag > 0)) throw UsageError("--tolerance must be positive");
      common.tolerance = tolerance_flag;
    }
    if (common.threads < 1) throw UsageError("--threads must be at least 1");

    const auto [rho_re, rho_im] = parse_complex_pair(rho_arg);
    const Complex rho(rho_re, rho_im);
    const HalfInt lambda = HalfInt::from_twice(lambda_x2);
    if ((js_cmd->parsed() || we_cmd->parsed()) && jcut_x2 < std::abs(lambda_x2) + 4)
      throw UsageError("--jcut-x2 must leave an interior margin: at least |lambda_x2| + 4");

    if (classify_cmd->parsed()) {
      const IrrepLabel label(lambda, rho);
      emit_json(common, classification_json(label, classify(label)));
      return 0;
    }

    if (decompose_cmd->parsed()) {
      const int A = (A_arg == "-1") ? -1 : 1;
      const CouplingProblem problem(FiniteLabel(HalfInt::from_twice(gamma_x2), A),
                                    IrrepLabel(lambda, rho));
      if (!is_decomposable(problem)) {
        json err = error_json(
            "not decomposable: the Casimirs are not diagonalisable because rho + A*lambda is an "
            "integer in (-2*gamma, 2*gamma)");
        err["lambda_x2"] = lambda_x2;
        err["rho"] = complex_json(rho);
        err["gamma_x2"] = gamma_x2;
        err["A"] = A;
        emit(common, err.dump(2));
        return 1;
      }
      const CGTable table =
          decompose(problem, HalfInt::from_twice(jmax_x2), common.threads);
      if (common.csv)
        emit(common, cg_table_csv(table));
      else
        emit_json(common, cg_table_json(table));
      return 0;
    }

    if (verify_cmd->parsed()) {
      verify::Options vopts;
      vopts.seed = common.seed;
      vopts.tolerance_override = common.tolerance;
      vopts.threads = common.threads;
      const verify::Report report = verify::run_acceptance(vopts);
      json checks = json::array();
      for (const auto& c : report.checks)
        checks.push_back(json{{"name", c.name},
                              {"anchor", c.anchor},
                              {"status", c.pass ? "pass" : "fail"},
                              {"residual", c.residual},
                              {"tolerance", c.tolerance}});
      emit_json(common, json{{"seed", report.options.seed},
                             {"checks", checks},
                             {"notes", report.notes},
                             {"status", report.all_pass ? "pass" : "fail"}});
      return report.all_pass ? 0 : 1;
    }

    if (js_cmd->parsed()) {
      const IrrepLabel label(lambda, rho);
      std::vector<int> As;
      if (A_arg == "both")
        As = {1, -1};
      else
        As = {A_arg == "-1" ? -1 : 1};
      const HalfInt j_cut = HalfInt::from_twice(jcut_x2);
      json per_A = json::array();
      for (int A : As) {
        const JSOperators ops = js_operators(label, A, j_cut);
        const JSReconstruction rec = js_reconstruct(label, A, j_cut);
        json comms = json::object();
        double comm_worst = 0.0;
        for (int B : {1, -1}) {
          const JSCommutators jc = js_commutators(label, A, B, j_cut);
          json residuals = json::object();
          for (const auto& [name, r] : jc.residuals) residuals[name] = r;
          comms[B == 1 ? "B=+1" : "B=-1"] = residuals;
          comm_worst = std::max(comm_worst, jc.max_residual);
        }
        json components = json::object();
        for (const auto& [mu, op] : ops.T.components)
          components["T_mu_x2=" + std::to_string(mu.twice())] =
              sparse_json(op, ops.T.target, ops.T.source);
        for (const auto& [mu, op] : ops.Ttilde.components)
          components["Ttilde_mu_x2=" + std::to_string(mu.twice())] =
              sparse_json(op, ops.Ttilde.target, ops.Ttilde.source);
        per_A.push_back(json{{"A", A},
                             {"components", components},
                             {"reconstruction_residual", rec.residual},
                             {"commutators", comms},
                             {"max_commutator_residual", comm_worst}});
      }
      emit_json(common, json{{"lambda_x2", lambda_x2},
                             {"rho", complex_json(rho)},
                             {"jcut_x2", jcut_x2},
                             {"reports", per_A}});
      return 0;
    }

    if (we_cmd->parsed()) {
      const int A = (A_arg == "-1") ? -1 : 1;
      const HalfInt gamma = HalfInt::from_twice(gamma_x2);
      const HalfInt nu = we_cmd->count("--nu-x2") ? HalfInt::from_twice(nu_x2) : gamma;
      const CouplingProblem problem(FiniteLabel(gamma, A), IrrepLabel(lambda, rho));
      if (!is_decomposable(problem)) {
        emit(common, error_json("not decomposable, no projection exists").dump(2));
        return 1;
      }
      const EigenPair target{lambda + nu, rho + Complex(A * nu.value())};
      const HalfInt j_cut = HalfInt::from_twice(jcut_x2);
      const TensorOperator proj = wigner_eckart_projection(problem, target, j_cut);
      json residuals = json::object();
      for (Generator g : {Generator::J0, Generator::Jp, Generator::Jm, Generator::K0,
                          Generator::Kp, Generator::Km})
        residuals[generator_name(g)] = intertwiner_residual(proj, g);
      const CGTable table = decompose(problem, proj.target.j_top(), common.threads);
      const ReducedElement red = reduced_matrix_element(proj, table);
      emit_json(common, json{{"lambda_x2", lambda_x2},
                             {"rho", complex_json(rho)},
                             {"gamma_x2", gamma_x2},
                             {"A", A},
                             {"target_Lambda_x2", target.Lambda.twice()},
                             {"target_P", complex_json(target.P)},
                             {"reduced_value", complex_json(red.value)},
                             {"scatter", red.scatter},
                             {"samples", red.samples},
                             {"intertwiner_residuals", residuals}});
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    emit(common, error_json(e.what()).dump(2));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
