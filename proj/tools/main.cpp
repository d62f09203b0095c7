#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncsigma/workbench.hpp"

namespace {

constexpr const char* kCsvHelp = R"(CSV output:
  instanton, sweep  one row per truncation box / swept value with columns
                    N, theta, lambda_re, lambda_im, tau, c1, S_D, idempotent,
                    self_adjoint, tail_mass, self_duality, anti_self_duality,
                    el_residual, L_D_W, E_W, chiral_residual_W, iterations,
                    inversion_residual, status, error (sweep adds param, value)
  verify, models    one row per check: check, pass, value, threshold

Exit codes: 0 ok, 1 invariant failure, 2 usage error, 3 numerical failure.)";

struct Setting {
  const char* key;
  const char* help;
  std::optional<std::string> value;
};

struct Flags {
  std::optional<std::string> config_path;
  std::vector<Setting> settings{
      {"theta", "deformation parameter in (0, 1)", {}},
      {"lambda_re", "real part of the Gaussian shift", {}},
      {"lambda_im", "imaginary part of the Gaussian shift", {}},
      {"trunc", "Fourier truncation box N", {}},
      {"grid_l", "quadrature half-width", {}},
      {"grid_points", "quadrature points (odd)", {}},
      {"alg_eps", "algebraic tolerance", {}},
      {"trunc_eps", "truncation tail tolerance", {}},
      {"quad_eps", "quadrature tolerance", {}},
      {"seed", "RNG seed for sampled inputs", {}},
      {"format", "json | csv", {}},
      {"out", "write output to a file instead of stdout", {}}};
};

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_path, "key=value config file; flags override it");
  for (auto& s : f.settings) {
    std::string flag = std::string("--") + s.key;
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    app.add_option(flag, s.value, s.help);
  }
}

void emit(const ncsigma::ModelReport& rep, const ncsigma::RunConfig& cfg) {
  const std::string text = ncsigma::render(rep, cfg.output_format);
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw ncsigma::UsageError("cannot write " + cfg.output_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for sigma-models on the noncommutative torus"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  Flags flags;
  add_common(app, flags);

  auto* inst = app.add_subcommand("instanton", "Gaussian instanton with a convergence table");
  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  auto* sweep = app.add_subcommand("sweep", "Instanton sweep over theta, lambda or trunc");
  auto* models = app.add_subcommand("models", "Chiral, endomorphism and coercive models");
  for (auto* sub : {inst, verify, sweep, models}) sub->fallthrough();

  std::string suite = "all";
  verify->add_option("--suite", suite, "algebra | module | models | symmetry | all");
  std::string param;
  std::vector<double> values;
  sweep->add_option("--param", param, "theta | lambda | trunc")->required();
  sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
  std::string model;
  std::vector<int> matrix, mn;
  models->add_option("--model", model, "chiral | endo | su2")->required();
  models->add_option("--matrix", matrix, "p,q,r,s")->delimiter(',');
  models->add_option("--mn", mn, "m,n")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ncsigma::kExitUsage;
  }

  try {
    ncsigma::RunConfig cfg;
    if (flags.config_path) ncsigma::load_config_file(*flags.config_path, cfg);
    for (const auto& s : flags.settings) {
      if (s.value) ncsigma::apply_setting(cfg, s.key, *s.value);
    }
    cfg.validate();

    ncsigma::ModelReport rep;
    if (*inst) {
      rep = ncsigma::cmd_instanton(cfg);
    } else if (*verify) {
      rep = ncsigma::cmd_verify(cfg, ncsigma::parse_suite(suite));
    } else if (*sweep) {
      rep = ncsigma::cmd_sweep(cfg, ncsigma::parse_sweep_param(param), values);
    } else {
      const auto kind = ncsigma::parse_model_kind(model);
      rep = ncsigma::cmd_models(cfg, kind, kind == ncsigma::ModelKind::chiral ? mn : matrix);
    }
    emit(rep, cfg);
    return rep.exit_code();
  } catch (const ncsigma::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return ncsigma::kExitUsage;
  } catch (const ncsigma::PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return ncsigma::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return ncsigma::kExitNumerical;
  }
}
