#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "ncsigma/clock_shift.hpp"
#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/sigma_models.hpp"
#include "ncsigma/symmetry.hpp"
#include "ncsigma/workbench.hpp"

namespace ncsigma {

VerifyOptions::VerifyOptions() : ad([](LatticePoint w, const TorusElement& x) { return ncsigma::ad(w, x); }) {}

Suite parse_suite(std::string_view s) {
  if (s == "algebra") return Suite::algebra;
  if (s == "module") return Suite::module;
  if (s == "models") return Suite::models;
  if (s == "symmetry") return Suite::symmetry;
  if (s == "all") return Suite::all;
  throw UsageError("suite must be algebra, module, models, symmetry or all");
}

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::algebra: return "algebra";
    case Suite::module: return "module";
    case Suite::models: return "models";
    case Suite::symmetry: return "symmetry";
    case Suite::all: return "all";
  }
  return "?";
}

namespace {

using Rng = std::mt19937_64;

const Complex kI(0.0, 1.0);

double rel(double value, double scale) { return value / std::max(1.0, std::abs(scale)); }

TorusElement unit_l1(TorusElement a) {
  const double s = l1_norm(a);
  return s > 0 ? a * (1.0 / s) : a;
}

void check_le(ModelReport& r, const std::string& suite, const std::string& name, double value,
              double threshold, std::string note = {}) {
  r.add_check(suite + ": " + name, value <= threshold, value, threshold, std::move(note));
}

// ---- algebra ----------------------------------------------------------------

void suite_algebra(ModelReport& r, const RunConfig& cfg) {
  const auto& tol = cfg.tolerances;
  const double theta = cfg.theta;
  const std::string s = "algebra";
  double assoc = 0, invol = 0, tracial = 0, leibniz = 0, dtrace = 0, adj2 = 0, json_rt = 0;
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t base = cfg.seed * 1000 + static_cast<std::uint64_t>(3 * i);
    const auto a = unit_l1(random_element(theta, 4, base));
    const auto b = unit_l1(random_element(theta, 4, base + 1));
    const auto c = unit_l1(random_element(theta, 4, base + 2));
    assoc = std::max(assoc, l1_norm(mul(mul(a, b), c) - mul(a, mul(b, c))));
    invol = std::max(invol, l1_norm(adjoint(mul(a, b)) - mul(adjoint(b), adjoint(a))));
    tracial = std::max(tracial, std::abs(trace(mul(a, b)) - trace(mul(b, a))));
    for (int j = 1; j <= 2; ++j) {
      const auto lhs = delta(j, mul(a, b));
      const auto rhs = mul(delta(j, a), b) + mul(a, delta(j, b));
      leibniz = std::max(leibniz, l1_norm(lhs - rhs) / (kTwoPi * 8));
      dtrace = std::max(dtrace, std::abs(trace(delta(j, a))));
    }
    adj2 = std::max(adj2, l1_norm(adjoint(adjoint(a)) - a));
    nlohmann::json j = a;
    TorusElement back;
    from_json(nlohmann::json::parse(j.dump()), back);
    json_rt = std::max(json_rt, back == a ? 0.0 : 1.0);
  }
  check_le(r, s, "associativity", assoc, tol.algebraic_eps);
  check_le(r, s, "involution reverses products", invol, tol.algebraic_eps);
  check_le(r, s, "tracial property", tracial, tol.algebraic_eps);
  check_le(r, s, "Leibniz rule (per unit derivation scale)", leibniz, tol.algebraic_eps);
  check_le(r, s, "derivations kill the trace", dtrace, tol.algebraic_eps);
  check_le(r, s, "adjoint is involutive", adj2, tol.algebraic_eps);
  check_le(r, s, "JSON round trip is bit exact", json_rt, 0.0);

  // Clock-and-shift oracle at theta = 1/7.
  const int q = 7;
  const double tq = 1.0 / q;
  double prod = 0, tr = 0;
  for (int i = 0; i < 10; ++i) {
    const auto a = unit_l1(random_element(tq, q - 1, cfg.seed * 77 + 2 * i));
    const auto b = unit_l1(random_element(tq, q - 1, cfg.seed * 77 + 2 * i + 1));
    const auto ab = mul(a, b);
    const auto lhs = oracle::clock_shift_image(ab, q);
    const auto rhs = oracle::clock_shift_image(a, q) * oracle::clock_shift_image(b, q);
    prod = std::max(prod, lhs.max_abs_diff(rhs));
    tr = std::max(tr, std::abs(trace(a) - oracle::clock_shift_image(a, q).normalized_trace()));
  }
  check_le(r, s, "clock-and-shift product oracle (q=7)", prod, tol.algebraic_eps);
  check_le(r, s, "clock-and-shift trace oracle (q=7)", tr, tol.algebraic_eps);
}

// ---- module -----------------------------------------------------------------

SchwartzVector random_gaussian(double theta, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Complex c(0.5 + 0.5 * std::abs(u(rng)), 0.5 * u(rng));
  const Complex lambda(u(rng), 0.4 * u(rng));
  return SchwartzVector::gaussian(theta, c, lambda);
}

void suite_module(ModelReport& r, const RunConfig& cfg) {
  const auto& tol = cfg.tolerances;
  const double theta = cfg.theta;
  const std::string s = "module";
  const GridSpec grid{cfg.grid_L, cfg.grid_points};
  InnerProductOptions io;
  io.box = cfg.trunc_box;
  io.tol = tol;
  Rng rng(cfg.seed);
  double herm = 0, pos = 0, posb = 0, compat_a = 0, compat_b = 0, bridge = 0, tr_rel = 0;
  bool positive = true;
  for (int i = 0; i < 3; ++i) {
    const auto xi = random_gaussian(theta, rng);
    const auto eta = random_gaussian(theta, rng);
    const auto zeta = random_gaussian(theta, rng);
    const auto a_xe = inner_A(xi, eta, io).value;
    const auto b_xe = inner_B(xi, eta, io).value;
    herm = std::max({herm, gns_norm(a_xe - adjoint(inner_A(eta, xi, io).value)),
                     gns_norm(b_xe - adjoint(inner_B(eta, xi, io).value))});

    const auto a_xx = inner_A(xi, xi, io).value;
    const auto b_xx = inner_B(xi, xi, io).value;
    double l2 = 0.0;
    for (int k = 0; k < grid.points; ++k) {
      const double w = (k == 0 || k + 1 == grid.points) ? 0.5 : 1.0;
      l2 += w * std::norm(xi(grid.node(k)));
    }
    l2 *= grid.spacing() * inner_a_normalization(theta);
    positive = positive && trace(a_xx).real() > 0 && trace(b_xx).real() > 0;
    pos = std::max(pos, rel(std::abs(trace(a_xx) - l2), l2));
    posb = std::max(posb, gns_norm(b_xx - adjoint(b_xx)));
    tr_rel = std::max(tr_rel, rel(std::abs(trace(b_xx) - trace(a_xx) / std::abs(theta)),
                                  trace(b_xx).real()));

    const auto a = random_element(theta, 1, cfg.seed + 10 + i) * 0.3;
    const auto b = random_element(dual_theta(theta), 1, cfg.seed + 20 + i) * 0.3;
    compat_a = std::max(compat_a, gns_norm(inner_A(act_left(a, xi, grid), eta, io).value -
                                           mul(a, a_xe)));
    compat_b = std::max(compat_b, gns_norm(inner_B(xi, act_right(eta, b, grid), io).value -
                                           mul(b_xe, b)));

    const auto lhs = act_left(a_xe, zeta, grid);
    const auto rhs = act_right(xi, inner_B(eta, zeta, io).value, grid);
    bridge = std::max(bridge, rel(grid_distance(lhs, rhs, grid), grid_max(lhs, grid)));
  }
  check_le(r, s, "Hermitian symmetry", herm, tol.quadrature_eps);
  r.add_check(s + ": positivity", positive, positive ? 0.0 : 1.0, 0.0);
  check_le(r, s, "tau(_A<xi,xi>) matches int |xi|^2", pos, tol.quadrature_eps);
  check_le(r, s, "<xi,xi>_B self-adjoint", posb, tol.quadrature_eps);
  check_le(r, s, "left action compatibility", compat_a, tol.quadrature_eps);
  check_le(r, s, "right action compatibility", compat_b, tol.quadrature_eps);
  check_le(r, s, "associativity bridge", bridge, tol.quadrature_eps);
  check_le(r, s, "trace relation tau_B = tau_A / |theta|", tr_rel, tol.quadrature_eps);

  // ODE: exact for the closed form, second order for samples.
  const auto g = SchwartzVector::gaussian(theta, 1.0, cfg.lambda);
  check_le(r, s, "Gaussian ODE residual (closed form)", gaussian_ode_residual(g, cfg.lambda, grid), 0.0);
  const double coarse = gaussian_ode_residual(g.to_sampled(GridSpec{8.0, 401}), cfg.lambda);
  const double fine = gaussian_ode_residual(g.to_sampled(GridSpec{8.0, 801}), cfg.lambda);
  r.add_check(s + ": sampled ODE residual is second order", coarse / fine >= 3.5, coarse / fine, 3.5,
              "ratio of residuals for h and h/2");

  try {
    const auto inst = instanton(theta, cfg.lambda, tol, cfg.trunc_box);
    const auto d = projection_defects(inst.projection);
    check_le(r, s, "instanton idempotent", d.idempotent, 10 * tol.truncation_eps);
    check_le(r, s, "instanton self-adjoint", d.self_adjoint, tol.algebraic_eps);
    check_le(r, s, "inverse residual", inst.inversion.residual, tol.truncation_eps);
    double prev = -1.0;
    bool halving = true;
    for (int box : {4, 6, 8, 10}) {
      const double tail = instanton(theta, cfg.lambda, tol, box, false).tail_mass;
      if (prev >= 0 && tail > 1e-300 && !(tail <= 0.5 * prev)) halving = false;
      prev = tail;
    }
    r.add_check(s + ": tail mass at least halves per box step", halving, halving ? 0.0 : 1.0, 0.0);
  } catch (const NumericalError& e) {
    r.add_check(s + ": instanton construction", false, 1.0, 0.0, e.what());
  }
}

// ---- models -----------------------------------------------------------------

TorusElement random_unitary(double theta, std::uint64_t seed, int m, int n) {
  const auto h = random_selfadjoint(theta, 2, seed) * 0.15;
  return prune(mul(exp_i(h, 1.0), TorusElement::monomial(theta, m, n))).element;
}

void suite_models(ModelReport& r, const RunConfig& cfg) {
  const auto& tol = cfg.tolerances;
  const double theta = cfg.theta;
  const std::string s = "models";

  double mono_e = 0, mono_r = 0;
  for (int m = -5; m <= 5; ++m) {
    for (int n = -5; n <= 5; ++n) {
      const auto w = TorusElement::monomial(theta, m, n);
      const double want = 4 * kPi * kPi * (m * m + n * n);
      mono_e = std::max(mono_e, std::abs(chiral_energy(w) - want));
      mono_r = std::max(mono_r, chiral_residual(w));
    }
  }
  check_le(r, s, "monomial chiral energies 4 pi^2 (m^2+n^2)", mono_e, 1e-12);
  check_le(r, s, "monomial chiral residual", mono_r, tol.algebraic_eps);

  // Projection corpus: trivial projections and instantons.
  std::vector<TorusElement> corpus{TorusElement(theta), TorusElement::identity(theta)};
  for (Complex lam : {Complex(0.0), Complex(0.3, 0.0), Complex(-0.5, 0.2)}) {
    try {
      corpus.push_back(instanton(theta, lam, tol, cfg.trunc_box).projection);
    } catch (const NumericalError& e) {
      r.add_check(s + ": instanton construction", false, 1.0, 0.0, e.what());
    }
  }
  double bound = 0, identity = 0, iff = 0;
  for (const auto& p : corpus) {
    const double sd = ising_energy(p);
    const double c1 = chern_number(p);
    bound = std::max(bound, -(sd + 2 * kPi * c1));
    const bool equal = std::abs(sd + 2 * kPi * c1) <= 1e-3;
    const bool dual = self_duality_residual(p) <= 1e-4;
    iff = std::max(iff, equal == dual ? 0.0 : 1.0);
    const auto w = harmonic_from_projection(p);
    const double scale = std::max(1.0, l1_norm(laplacian(p)) * l1_norm(p));
    identity = std::max(identity, gns_norm(chiral_defect(w) - ising_el_defect(p) * 2.0) / scale);
  }
  check_le(r, s, "S_D + 2 pi c1 >= -tol", bound, 1e-3);
  check_le(r, s, "bound equality iff self-dual", iff, 0.0);
  check_le(r, s, "W = 1-2p: chiral defect = 2 (p Lap p - Lap p p)", identity, tol.algebraic_eps,
           "relative to ||Lap p||_1 ||p||_1");

  const auto u = random_unitary(theta, cfg.seed + 5, 1, 0);
  const Complex phase = std::polar(1.0, 0.7);
  const double e0 = chiral_energy(u);
  check_le(r, s, "chiral energy gauge invariance", rel(std::abs(chiral_energy(u * phase) - e0), e0),
           tol.algebraic_eps);
  check_le(r, s, "chiral residual gauge invariance",
           std::abs(chiral_residual(u * phase) - chiral_residual(u)), tol.algebraic_eps);
  const auto q0 = su2_from_matrix(theta, 1, 0, 2, 0);
  const auto q1 = CoerciveQuadruple{q0.mu * phase, q0.nu * std::conj(phase), q0.u, q0.v};
  check_le(r, s, "su2 energy gauge invariance", std::abs(su2_energy(q1) - su2_energy(q0)),
           tol.algebraic_eps * su2_energy(q0));

  if (corpus.size() > 2) {
    const double ld = chiral_energy(harmonic_from_projection(corpus[2]));
    r.add_check(s + ": min monomial energy 4 pi^2 exceeds L_D(1-2p)", ld < 4 * kPi * kPi, ld,
                4 * kPi * kPi, "value is L_D(1-2p); threshold is the least nontrivial monomial energy");
  }

  double endo = 0, su2 = 0;
  for (auto [p, q, rr, ss] : std::vector<std::array<int, 4>>{{1, 0, 0, 1}, {1, 1, 0, 1}, {2, 1, 1, 1}}) {
    const auto phi = endo_from_matrix(theta, p, q, rr, ss);
    for (const auto& pr : sample_endo_pairs(phi, 10, cfg.seed)) {
      endo = std::max(endo, std::abs(endo_el_pairing(pr, phi, tol)));
    }
  }
  for (auto [p, q, rr, ss] : std::vector<std::array<int, 4>>{{1, 0, 2, 0}, {1, 1, 1, 1}, {1, 2, 2, 4}}) {
    const auto phi = su2_from_matrix(theta, p, q, rr, ss);
    for (const auto& pr : sample_su2_pairs(phi, 10, cfg.seed)) {
      su2 = std::max(su2, std::abs(su2_el_pairing(pr, phi, tol)));
    }
  }
  check_le(r, s, "endo EL pairing on monomial maps", endo, tol.algebraic_eps);
  check_le(r, s, "su2 EL pairing on monomial coercive maps", su2, tol.algebraic_eps);

  // First variation: second-order agreement along e^{ith} W.
  const auto h = random_selfadjoint(theta, 2, cfg.seed + 9) * 0.3;
  double worst_ratio = 1e300;
  double prev = -1.0;
  for (double step : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const auto fv = first_variation_check(Model::chiral, u, h, step);
    const double err = std::abs(fv.fd - fv.pairing);
    if (prev > 0) worst_ratio = std::min(worst_ratio, prev / err);
    prev = err;
  }
  r.add_check(s + ": first variation is second order", worst_ratio >= 3.5, worst_ratio, 3.5,
              "smallest error ratio per step halving");
  const auto fm = first_variation_check(Model::chiral, TorusElement::monomial(theta, 2, -1), h, 1e-3);
  check_le(r, s, "first variation vanishes at monomials", std::max(std::abs(fm.fd), std::abs(fm.pairing)),
           1e-8);

  const auto run = energy_descent(Model::chiral, TorusElement::monomial(theta, 1, 0), 5, 1e-3);
  double drift = 0.0;
  for (double e : run.energy) drift = std::max(drift, std::abs(e - 4 * kPi * kPi));
  check_le(r, s, "descent from U stays at 4 pi^2", drift, 1e-8);
}

// ---- symmetry ---------------------------------------------------------------

void suite_symmetry(ModelReport& r, const RunConfig& cfg, const VerifyOptions& opts) {
  const auto& tol = cfg.tolerances;
  const double theta = cfg.theta;
  const std::string s = "symmetry";
  const auto& adf = opts.ad;
  std::vector<LatticePoint> ws;
  for (int m = -2; m <= 2; ++m) {
    for (int n = -2; n <= 2; ++n) ws.push_back({m, n});
  }
  double group = 0, trace_shift = 0, hom = 0, star = 0, two_prod = 0;
  for (int i = 0; i < 4; ++i) {
    const auto x = unit_l1(random_element(theta, 3, cfg.seed * 31 + 2 * i));
    const auto y = unit_l1(random_element(theta, 3, cfg.seed * 31 + 2 * i + 1));
    for (std::size_t k = 0; k < ws.size(); k += 3) {
      const auto w = ws[k];
      const auto v = ws[(k * 7 + 3) % ws.size()];
      group = std::max(group, l1_norm(adf(w, adf(v, x)) - adf({w.m + v.m, w.n + v.n}, x)));
      trace_shift = std::max(trace_shift, std::abs(trace(adf(w, x)) - trace(x)));
      hom = std::max(hom, l1_norm(adf(w, mul(x, y)) - mul(adf(w, x), adf(w, y))));
      star = std::max(star, l1_norm(adf(w, adjoint(x)) - adjoint(adf(w, x))));
      const auto wm = TorusElement::monomial(theta, w.m, w.n);
      two_prod = std::max(two_prod, l1_norm(adf(w, x) - mul(mul(wm, x), adjoint(wm))));
    }
  }
  check_le(r, s, "group-action law", group, 1e-12);
  check_le(r, s, "trace preservation", trace_shift, 1e-12);
  check_le(r, s, "multiplicative", hom, tol.algebraic_eps);
  check_le(r, s, "commutes with adjoint", star, tol.algebraic_eps);
  check_le(r, s, "matches w x w^*", two_prod, tol.algebraic_eps);

  // Field data.
  double proj = 0, uni = 0, endo = 0, coer = 0;
  std::optional<TorusElement> p;
  try {
    p = instanton(theta, cfg.lambda, tol, cfg.trunc_box).projection;
  } catch (const NumericalError& e) {
    r.add_check(s + ": instanton construction", false, 1.0, 0.0, e.what());
  }
  const auto u = random_unitary(theta, cfg.seed + 3, 1, 1);
  const auto phi = endo_from_matrix(theta, 2, 1, 1, 1);
  const auto q = su2_from_matrix(theta, 1, 1, 2, 2);
  auto shift = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  auto proj_values = [](const TorusElement& x) {
    return std::array<double, 4>{ising_energy(x), chern_number(x), ising_el_residual(x),
                                 self_duality_residual(x)};
  };
  const auto p_ref = p ? proj_values(*p) : std::array<double, 4>{};
  const double u_e = chiral_energy(u), u_r = chiral_residual(u);
  const double phi_e = endo_energy(phi), phi_r = endo_relation_residual(phi);
  const double q_e = su2_energy(q);
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const auto w = ws[k];
    if (p && k % 4 == 0) {
      const auto got = proj_values(adf(w, *p));
      for (int i = 0; i < 4; ++i) proj = std::max(proj, shift(got[i], p_ref[i]));
    }
    const auto uw = adf(w, u);
    uni = std::max({uni, shift(chiral_energy(uw), u_e), shift(chiral_residual(uw), u_r)});
    const EndoPair pw{adf(w, phi.phiU), adf(w, phi.phiV)};
    endo = std::max({endo, shift(endo_energy(pw), phi_e), shift(endo_relation_residual(pw), phi_r)});
    const CoerciveQuadruple qw{q.mu, q.nu, adf(w, q.u), adf(w, q.v)};
    coer = std::max(coer, shift(su2_energy(qw), q_e));
  }
  check_le(r, s, "projection energies and residuals invariant", proj, tol.algebraic_eps);
  check_le(r, s, "unitary energy and residual invariant", uni, tol.algebraic_eps);
  check_le(r, s, "endomorphism energy invariant", endo, tol.algebraic_eps);
  check_le(r, s, "coercive energy invariant", coer, tol.algebraic_eps);

  // Monomial detector and gauge orbits.
  int wrong = 0;
  for (int i = 0; i < 10; ++i) {
    const int m = (i % 5) - 2, n = ((3 * i) % 7) - 3;
    const auto w = TorusElement::monomial(theta, m, n, std::polar(1.0, 0.37 * i));
    const auto d = monomial_detector(w, tol);
    if (!d.is_monomial || !d.witness || d.witness->m != m || d.witness->n != n) ++wrong;
    const auto nm = random_unitary(theta, cfg.seed + 100 + i, m, n);
    if (monomial_detector(nm, tol).is_monomial) ++wrong;
  }
  check_le(r, s, "monomial detector misclassifications", wrong, 0.0);
  int orbit_fail = 0;
  for (const auto w : ws) {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {2, -1}}) {
      const auto x = TorusElement::monomial(theta, m, n);
      if (!projective_equal(x, adf(w, x), tol)) ++orbit_fail;
    }
    const EndoPair pw{adf(w, phi.phiU), adf(w, phi.phiV)};
    if (!endo_gauge_equal(phi, pw, tol)) ++orbit_fail;
    const CoerciveQuadruple qw{q.mu, q.nu, adf(w, q.u), adf(w, q.v)};
    if (!coercive_gauge_equal(q, qw, tol)) ++orbit_fail;
  }
  check_le(r, s, "ad orbits of monomial solutions lie in gauge orbits", orbit_fail, 0.0);
}

}  // namespace

ModelReport cmd_verify(const RunConfig& config, Suite suite, const VerifyOptions& opts) {
  config.validate();
  ModelReport rep;
  rep.model = "verify";
  rep.theta = config.theta;
  rep.config = config;
  rep.tolerances = config.tolerances;
  rep.inputs = {{"suite", std::string(to_string(suite))}};
  const bool all = suite == Suite::all;
  try {
    if (all || suite == Suite::algebra) suite_algebra(rep, config);
    if (all || suite == Suite::module) suite_module(rep, config);
    if (all || suite == Suite::models) suite_models(rep, config);
    if (all || suite == Suite::symmetry) suite_symmetry(rep, config, opts);
  } catch (const NumericalError& e) {
    rep.errors.push_back({"numerical", e.what(), nlohmann::json::object()});
  }
  int passed = 0;
  for (const auto& c : rep.checks) passed += c.pass ? 1 : 0;
  rep.metrics = {{"checks", rep.checks.size()}, {"passed", passed}};
  return rep;
}

}  // namespace ncsigma
