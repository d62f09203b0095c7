#include "ncsigma/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "ncsigma/sigma_models.hpp"
#include "ncsigma/symmetry.hpp"

namespace ncsigma {

namespace {

constexpr std::array<LatticePoint, 5> kOrbitSample{
    LatticePoint{1, 0}, LatticePoint{0, 1}, LatticePoint{1, 1}, LatticePoint{-2, 1},
    LatticePoint{2, -3}};

nlohmann::json row_keys_null() {
  nlohmann::json r;
  for (const char* k : {"theta", "lambda_re", "lambda_im", "N", "tau", "c1", "S_D", "idempotent",
                        "self_adjoint", "tail_mass", "self_duality", "anti_self_duality",
                        "el_residual", "L_D_W", "E_W", "chiral_residual_W", "iterations",
                        "inversion_residual"}) {
    r[k] = nullptr;
  }
  r["status"] = "ok";
  r["error"] = "";
  return r;
}

nlohmann::json error_row(double theta, Complex lambda, int box, const std::exception& e) {
  auto r = row_keys_null();
  r["theta"] = theta;
  r["lambda_re"] = lambda.real();
  r["lambda_im"] = lambda.imag();
  r["N"] = box;
  r["status"] = "error";
  r["error"] = e.what();
  return r;
}

ErrorRecord to_error_record(const std::exception& e) {
  ErrorRecord rec{"numerical", e.what(), nlohmann::json::object()};
  if (const auto* inv = dynamic_cast<const InversionError*>(&e)) {
    rec.kind = "inversion";
    rec.detail = {{"iterations", inv->iterations()}, {"residual", inv->residual()}};
  } else if (const auto* tr = dynamic_cast<const TruncationError*>(&e)) {
    rec.kind = "truncation";
    rec.detail = {{"tail_mass", tr->tail_mass()}};
  } else if (dynamic_cast<const PreconditionError*>(&e)) {
    rec.kind = "precondition";
  }
  return rec;
}

void fill_common(ModelReport& r, const RunConfig& cfg, std::string model) {
  r.model = std::move(model);
  r.theta = cfg.theta;
  r.config = cfg;
  r.tolerances = cfg.tolerances;
}

}  // namespace

nlohmann::json instanton_row(const Instanton& inst) {
  const auto& p = inst.projection;
  const auto defects = projection_defects(p);
  const auto w = harmonic_from_projection(p);
  const double ld = chiral_energy(w);
  auto r = row_keys_null();
  r["theta"] = inst.theta;
  r["lambda_re"] = inst.lambda.real();
  r["lambda_im"] = inst.lambda.imag();
  r["N"] = inst.box;
  r["tau"] = trace(p).real();
  r["c1"] = chern_number(p);
  r["S_D"] = ising_energy(p);
  r["idempotent"] = defects.idempotent;
  r["self_adjoint"] = defects.self_adjoint;
  r["tail_mass"] = inst.tail_mass;
  r["self_duality"] = self_duality_residual(p);
  r["anti_self_duality"] = anti_self_duality_residual(p);
  r["el_residual"] = ising_el_residual(p);
  r["L_D_W"] = ld;
  r["E_W"] = ld / 2.0;
  r["chiral_residual_W"] = chiral_residual(w);
  r["iterations"] = inst.inversion.iterations;
  r["inversion_residual"] = inst.inversion.residual;
  return r;
}

ModelReport cmd_instanton(const RunConfig& config) {
  config.validate();
  ModelReport rep;
  fill_common(rep, config, "instanton");
  rep.inputs = {{"theta", config.theta},
                {"lambda", {config.lambda.real(), config.lambda.imag()}},
                {"trunc_box", config.trunc_box}};
  const auto& tol = config.tolerances;

  for (int box : kConvergenceBoxes) {
    try {
      rep.convergence.push_back(instanton_row(instanton(config.theta, config.lambda, tol, box, false)));
    } catch (const NumericalError& e) {
      rep.convergence.push_back(error_row(config.theta, config.lambda, box, e));
    }
  }

  Instanton inst;
  try {
    inst = instanton(config.theta, config.lambda, tol, config.trunc_box, true);
  } catch (const NumericalError& e) {
    rep.errors.push_back(to_error_record(e));
    return rep;
  }
  const auto row = instanton_row(inst);
  const GridSpec grid{config.grid_L, config.grid_points};
  const auto xi = SchwartzVector::gaussian(config.theta, 1.0, config.lambda);

  rep.energy = row["S_D"].get<double>();
  rep.chern = row["c1"].get<double>();
  rep.residuals = {{"self_duality", row["self_duality"]},
                   {"anti_self_duality", row["anti_self_duality"]},
                   {"ising_el", row["el_residual"]},
                   {"idempotent", row["idempotent"]},
                   {"self_adjoint", row["self_adjoint"]},
                   {"chiral_W", row["chiral_residual_W"]},
                   {"inversion", inst.inversion.residual},
                   {"gaussian_ode", gaussian_ode_residual(xi, config.lambda, grid)},
                   {"tail_mass", inst.tail_mass}};
  rep.metrics = {{"tau", row["tau"]},
                 {"S_D", row["S_D"]},
                 {"L_D_W", row["L_D_W"]},
                 {"E_W", row["E_W"]},
                 {"support", inst.projection.support_size()},
                 {"inversion_iterations", inst.inversion.iterations},
                 {"inversion_history", inst.inversion.history},
                 {"chern_integrality",
                  std::abs(*rep.chern - std::nearbyint(*rep.chern))}};

  rep.add_check("projection idempotent", row["idempotent"].get<double>() <= 10 * tol.truncation_eps,
                row["idempotent"].get<double>(), 10 * tol.truncation_eps);
  rep.add_check("projection self-adjoint", row["self_adjoint"].get<double>() <= tol.algebraic_eps,
                row["self_adjoint"].get<double>(), tol.algebraic_eps);
  rep.add_check("truncation tail", inst.tail_mass <= tol.truncation_eps, inst.tail_mass,
                tol.truncation_eps);
  rep.add_check("inverse residual", inst.inversion.residual <= tol.truncation_eps,
                inst.inversion.residual, tol.truncation_eps);
  return rep;
}

SweepParam parse_sweep_param(std::string_view s) {
  if (s == "theta") return SweepParam::theta;
  if (s == "lambda") return SweepParam::lambda;
  if (s == "trunc") return SweepParam::trunc;
  throw UsageError("sweep parameter must be theta, lambda or trunc");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::theta: return "theta";
    case SweepParam::lambda: return "lambda";
    case SweepParam::trunc: return "trunc";
  }
  return "?";
}

ModelReport cmd_sweep(const RunConfig& config, SweepParam param, std::vector<double> values) {
  config.validate();
  if (values.empty()) throw UsageError("sweep needs at least one value");
  if (param == SweepParam::trunc) {
    for (double v : values) {
      if (v != std::floor(v) || v < 1) throw UsageError("trunc sweep values must be integers >= 1");
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  auto run_row = [config, param](double v) {
    double theta = config.theta;
    Complex lambda = config.lambda;
    int box = config.trunc_box;
    switch (param) {
      case SweepParam::theta: theta = v; break;
      case SweepParam::lambda: lambda = Complex(v, config.lambda.imag()); break;
      case SweepParam::trunc: box = static_cast<int>(v); break;
    }
    nlohmann::json row;
    try {
      row = instanton_row(instanton(theta, lambda, config.tolerances, box, false));
    } catch (const std::exception& e) {
      row = error_row(theta, lambda, box, e);
    }
    row["param"] = std::string(to_string(param));
    row["value"] = v;
    return row;
  };

  std::vector<std::future<nlohmann::json>> jobs;
  jobs.reserve(values.size());
  for (std::size_t i : order) jobs.push_back(std::async(std::launch::async, run_row, values[i]));

  ModelReport rep;
  fill_common(rep, config, "sweep");
  rep.inputs = {{"param", std::string(to_string(param))}, {"values", values}};
  for (auto& j : jobs) {
    auto row = j.get();
    if (row["status"] != "ok") {
      rep.errors.push_back({"row", row["error"].get<std::string>(), {{"value", row["value"]}}});
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "chiral") return ModelKind::chiral;
  if (s == "endo") return ModelKind::endo;
  if (s == "su2") return ModelKind::su2;
  throw UsageError("model must be chiral, endo or su2");
}

namespace {

ModelReport models_chiral(const RunConfig& config, int m, int n) {
  const auto& tol = config.tolerances;
  ModelReport rep;
  fill_common(rep, config, "chiral");
  rep.inputs = {{"m", m}, {"n", n}};
  const auto w = TorusElement::monomial(config.theta, m, n);
  const double ld = chiral_energy(w);
  const double expected = 4.0 * kPi * kPi * (static_cast<double>(m) * m + static_cast<double>(n) * n);
  const double res = chiral_residual(w);
  rep.energy = ld;
  rep.residuals = {{"chiral", res}};
  rep.metrics = {{"L_D", ld}, {"E", ld / 2.0}, {"expected_L_D", expected}};
  const double scale = std::max(1.0, expected);
  rep.add_check("monomial energy", std::abs(ld - expected) <= tol.algebraic_eps * scale,
                std::abs(ld - expected), tol.algebraic_eps * scale);
  rep.add_check("monomial residual", res <= tol.algebraic_eps * scale, res, tol.algebraic_eps * scale);
  const auto det = monomial_detector(w, tol);
  const bool witness_ok = det.is_monomial && det.witness && det.witness->m == m && det.witness->n == n;
  rep.add_check("detector witness", witness_ok, witness_ok ? 0.0 : 1.0, 0.0);
  auto orbit = nlohmann::json::array();
  for (auto g : kOrbitSample) {
    const auto wg = ad(g, w);
    const double de = std::abs(chiral_energy(wg) - ld);
    const double dr = std::abs(chiral_residual(wg) - res);
    const bool proj = projective_equal(w, wg, tol);
    orbit.push_back({{"w", {g.m, g.n}}, {"energy_shift", de}, {"residual_shift", dr},
                     {"projective_equal", proj}});
    rep.add_check("ad-invariance (" + std::to_string(g.m) + "," + std::to_string(g.n) + ")",
                  de <= tol.algebraic_eps * scale && dr <= tol.algebraic_eps * scale && proj,
                  std::max(de, dr), tol.algebraic_eps * scale);
  }
  rep.metrics["orbit"] = std::move(orbit);
  return rep;
}

ModelReport models_endo(const RunConfig& config, const std::vector<int>& a) {
  const auto& tol = config.tolerances;
  ModelReport rep;
  fill_common(rep, config, "endo");
  rep.inputs = {{"matrix", a}};
  const auto phi = endo_from_matrix(config.theta, a[0], a[1], a[2], a[3]);
  rep.energy = endo_energy(phi);
  const double rel = endo_relation_residual(phi);
  rep.residuals = {{"relation", rel}, {"unitarity", endo_unitarity_defect(phi)}};
  rep.add_check("relation preserved", rel <= tol.algebraic_eps, rel, tol.algebraic_eps);

  const auto pairs = sample_endo_pairs(phi, 10, config.seed);
  double worst_pair = 0.0, worst_con = 0.0, worst_orbit = 0.0;
  bool gauge = true;
  for (const auto& pr : pairs) {
    worst_con = std::max(worst_con, endo_constraint_residual(pr, phi));
    worst_pair = std::max(worst_pair, std::abs(endo_el_pairing(pr, phi, tol)));
    for (auto g : kOrbitSample) {
      const auto psi = ad_on_endo(g, phi);
      const ConstraintPair moved{ad(g, pr.A), ad(g, pr.B)};
      worst_orbit = std::max(worst_orbit, std::abs(endo_el_pairing(moved, psi, tol)));
    }
  }
  for (auto g : kOrbitSample) gauge = gauge && endo_gauge_equal(phi, ad_on_endo(g, phi), tol);
  rep.residuals["constraint"] = worst_con;
  rep.metrics = {{"pairs", pairs.size()}, {"max_pairing", worst_pair},
                 {"max_pairing_after_ad", worst_orbit}, {"orbit_in_gauge_orbit", gauge}};
  rep.add_check("constraint solver", worst_con <= tol.algebraic_eps, worst_con, tol.algebraic_eps);
  rep.add_check("EL pairing", worst_pair <= tol.algebraic_eps, worst_pair, tol.algebraic_eps);
  rep.add_check("EL pairing after ad", worst_orbit <= tol.algebraic_eps, worst_orbit, tol.algebraic_eps);
  rep.add_check("ad orbit inside gauge orbit", gauge, gauge ? 0.0 : 1.0, 0.0);
  return rep;
}

ModelReport models_su2(const RunConfig& config, const std::vector<int>& a) {
  const auto& tol = config.tolerances;
  ModelReport rep;
  fill_common(rep, config, "su2");
  rep.inputs = {{"matrix", a}};
  const auto phi = su2_from_matrix(config.theta, a[0], a[1], a[2], a[3]);
  rep.energy = su2_energy(phi);
  const auto d = coercive_defects(phi);
  rep.residuals = {{"modulus", d.modulus}, {"unitarity", d.unitarity}, {"commutation", d.commutation}};
  rep.add_check("images commute", d.commutation <= tol.algebraic_eps, d.commutation, tol.algebraic_eps);

  const auto pairs = sample_su2_pairs(phi, 10, config.seed);
  double worst_pair = 0.0, worst_con = 0.0, worst_orbit = 0.0, worst_energy = 0.0;
  bool gauge = true;
  for (const auto& pr : pairs) {
    const auto [c1, c2] = su2_constraint_residuals(pr, phi);
    worst_con = std::max({worst_con, c1, c2});
    worst_pair = std::max(worst_pair, std::abs(su2_el_pairing(pr, phi, tol)));
    for (auto g : kOrbitSample) {
      const auto psi = ad_on_coercive(g, phi);
      const ConstraintPair moved{ad(g, pr.A), ad(g, pr.B)};
      worst_orbit = std::max(worst_orbit, std::abs(su2_el_pairing(moved, psi, tol)));
    }
  }
  for (auto g : kOrbitSample) {
    const auto psi = ad_on_coercive(g, phi);
    gauge = gauge && coercive_gauge_equal(phi, psi, tol);
    worst_energy = std::max(worst_energy, std::abs(su2_energy(psi) - *rep.energy));
  }
  rep.residuals["constraint"] = worst_con;
  rep.metrics = {{"pairs", pairs.size()}, {"max_pairing", worst_pair},
                 {"max_pairing_after_ad", worst_orbit}, {"energy_shift_after_ad", worst_energy},
                 {"orbit_in_gauge_orbit", gauge}};
  const double escale = std::max(1.0, *rep.energy);
  rep.add_check("constraint solver", worst_con <= tol.algebraic_eps, worst_con, tol.algebraic_eps);
  rep.add_check("EL pairing", worst_pair <= tol.algebraic_eps, worst_pair, tol.algebraic_eps);
  rep.add_check("EL pairing after ad", worst_orbit <= tol.algebraic_eps, worst_orbit, tol.algebraic_eps);
  rep.add_check("energy ad-invariant", worst_energy <= tol.algebraic_eps * escale, worst_energy,
                tol.algebraic_eps * escale);
  rep.add_check("ad orbit inside gauge orbit", gauge, gauge ? 0.0 : 1.0, 0.0);
  return rep;
}

}  // namespace

ModelReport cmd_models(const RunConfig& config, ModelKind model, const std::vector<int>& args) {
  config.validate();
  if (model == ModelKind::chiral) {
    if (args.size() != 2) throw UsageError("chiral model needs --mn m,n");
    return models_chiral(config, args[0], args[1]);
  }
  if (args.size() != 4) throw UsageError("endo and su2 models need --matrix p,q,r,s");
  const long long det = static_cast<long long>(args[0]) * args[3] - static_cast<long long>(args[1]) * args[2];
  if (model == ModelKind::endo) {
    if (det != 1) {
      throw UsageError("endo needs a matrix in SL(2,Z): ps - qr must be 1, got " + std::to_string(det));
    }
    return models_endo(config, args);
  }
  if (det != 0) {
    throw UsageError("su2 needs a singular matrix: ps - qr must be 0, got " + std::to_string(det));
  }
  return models_su2(config, args);
}

}  // namespace ncsigma
