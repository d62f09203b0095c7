#include "ncsigma/sigma_models.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "twist.hpp"

namespace ncsigma {

namespace {

const Complex kI(0.0, 1.0);

TorusElement dstar_d(const TorusElement& x, int j) {
  const auto d = delta(j, x);
  return mul(adjoint(d), d);
}

std::optional<LatticePoint> monomial_index(const TorusElement& x) {
  if (x.support_size() != 1) return std::nullopt;
  return x.terms().front().index;
}

LatticePoint require_monomial(const TorusElement& x, const char* what) {
  auto k = monomial_index(x);
  if (!k) throw PreconditionError(std::string(what) + ": image is not a monomial");
  return *k;
}

// Phase chi with U^p V^q (U^a V^b) (U^p V^q)^* = chi (U^a V^b).
Complex conj_phase(double theta, LatticePoint w, int a, int b) {
  return detail::twist_phase(theta, static_cast<long long>(w.m) * b -
                                        static_cast<long long>(w.n) * a);
}

long long cross(LatticePoint w, int a, int b) {
  return static_cast<long long>(w.m) * b - static_cast<long long>(w.n) * a;
}

// Conjugation by w leaves U^a V^b fixed. For rational theta this includes
// indices with theta * cross an integer, where the solvers' denominators vanish.
bool fixes(double theta, LatticePoint w, int a, int b) {
  constexpr double resonance = 1e-9;
  return cross(w, a, b) == 0 || std::abs(1.0 - conj_phase(theta, w, a, b)) <= resonance;
}

// x^* y x
TorusElement sandwich(const TorusElement& x, const TorusElement& y) {
  return mul(mul(adjoint(x), y), x);
}

// sum_j tau(A delta_j[x^* delta_j x])
Complex current_pairing(const TorusElement& A, const TorusElement& x) {
  Complex acc = 0.0;
  const auto xs = adjoint(x);
  for (int j = 1; j <= 2; ++j) {
    acc += trace_of_product(A, delta(j, mul(xs, delta(j, x))));
  }
  return acc;
}

std::string offending_message(const char* what, const std::vector<std::pair<int, int>>& bad) {
  std::ostringstream os;
  os << what << ": no solution, right side nonzero on the null lattice at";
  std::size_t shown = 0;
  for (const auto& [m, n] : bad) {
    if (shown++ == 8) {
      os << " ...";
      break;
    }
    os << " (" << m << "," << n << ")";
  }
  return os.str();
}

}  // namespace

// ---- two-point model --------------------------------------------------------

double ising_energy(const TorusElement& p) {
  const auto d1 = delta(1, p);
  const auto d2 = delta(2, p);
  return (trace_of_product(d1, d1) + trace_of_product(d2, d2)).real();
}

TorusElement ising_el_defect(const TorusElement& p) {
  const auto lp = laplacian(p);
  return mul(p, lp) - mul(lp, p);
}

double ising_el_residual(const TorusElement& p) { return gns_norm(ising_el_defect(p)); }

double chern_number(const TorusElement& p) {
  const auto d1 = delta(1, p);
  const auto d2 = delta(2, p);
  const Complex t = trace_of_product(p, commutator(d1, d2));
  return (t / (kTwoPi * kI)).real();
}

double self_duality_residual(const TorusElement& p) {
  const auto dbar = (delta(1, p) + kI * delta(2, p)) * 0.5;
  return gns_norm(mul(dbar, p));
}

double anti_self_duality_residual(const TorusElement& p) {
  const auto d = (delta(1, p) - kI * delta(2, p)) * 0.5;
  return gns_norm(mul(d, p));
}

ProjectionDefects projection_defects(const TorusElement& p) {
  return {gns_norm(mul(p, p) - p), gns_norm(p - adjoint(p))};
}

// ---- chiral model -----------------------------------------------------------

double chiral_energy(const TorusElement& w) {
  Complex acc = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const auto d = delta(j, w);
    acc += trace_of_product(adjoint(d), d);
  }
  return acc.real();
}

TorusElement chiral_defect(const TorusElement& w) {
  return mul(adjoint(w), laplacian(w)) + dstar_d(w, 1) + dstar_d(w, 2);
}

double chiral_residual(const TorusElement& w) { return gns_norm(chiral_defect(w)); }

TorusElement harmonic_from_projection(const TorusElement& p) {
  return TorusElement::identity(p.theta()) - p * 2.0;
}

// ---- endomorphisms ----------------------------------------------------------

EndoPair endo_from_matrix(double theta, int p, int q, int r, int s) {
  const long long det = static_cast<long long>(p) * s - static_cast<long long>(q) * r;
  if (det != 1) {
    throw PreconditionError("endo_from_matrix: need ps - qr = 1, got " + std::to_string(det));
  }
  return {TorusElement::monomial(theta, p, q), TorusElement::monomial(theta, r, s)};
}

double endo_relation_residual(const EndoPair& phi) {
  const Complex e = detail::twist_phase(phi.phiU.theta(), 1);
  return l1_norm(mul(phi.phiU, phi.phiV) - mul(phi.phiV, phi.phiU) * e);
}

double endo_unitarity_defect(const EndoPair& phi) {
  return std::max(unitarity_defect(phi.phiU), unitarity_defect(phi.phiV));
}

double endo_energy(const EndoPair& phi) { return chiral_energy(phi.phiU) + chiral_energy(phi.phiV); }

double endo_constraint_residual(const ConstraintPair& pair, const EndoPair& phi) {
  const auto lhs = pair.A - sandwich(phi.phiV, pair.A);
  const auto rhs = pair.B - sandwich(phi.phiU, pair.B);
  return l1_norm(lhs - rhs);
}

TorusElement solve_constraint_for_B(const TorusElement& A, const EndoPair& phi,
                                    const Tolerance& tol) {
  const LatticePoint w = require_monomial(phi.phiU, "solve_constraint_for_B");
  const double theta = A.theta();
  if (l1_norm(A - adjoint(A)) > tol.algebraic_eps * std::max(1.0, l1_norm(A))) {
    throw PreconditionError("solve_constraint_for_B: A is not self-adjoint");
  }
  const auto K = A - sandwich(phi.phiV, A);
  std::vector<Term> out;
  std::vector<std::pair<int, int>> bad;
  K.for_each_term([&](LatticePoint k, Complex c) {
    if (fixes(theta, w, k.m, k.n)) {
      if (std::abs(c) > tol.algebraic_eps) bad.emplace_back(k.m, k.n);
      return;
    }
    // phiU^* x phiU = conj(chi) x
    out.push_back({k, c / (1.0 - std::conj(conj_phase(theta, w, k.m, k.n)))});
  });
  if (!bad.empty()) {
    throw InconsistentConstraint(offending_message("solve_constraint_for_B", bad), bad);
  }
  auto B = TorusElement::from_terms(theta, out);
  if (l1_norm(B - adjoint(B)) > tol.algebraic_eps * std::max(1.0, l1_norm(B))) {
    throw PreconditionError("solve_constraint_for_B: solution is not self-adjoint");
  }
  return B;
}

Complex endo_el_pairing(const ConstraintPair& pair, const EndoPair& phi, const Tolerance& tol) {
  const double res = endo_constraint_residual(pair, phi);
  if (res > tol.algebraic_eps) {
    throw PreconditionError("endo_el_pairing: constraint residual " + std::to_string(res));
  }
  return current_pairing(pair.A, phi.phiU) + current_pairing(pair.B, phi.phiV);
}

// ---- coercive maps ----------------------------------------------------------

CoerciveDefects coercive_defects(const CoerciveQuadruple& phi) {
  CoerciveDefects d;
  d.modulus = std::abs(std::norm(phi.mu) + std::norm(phi.nu) - 1.0);
  d.unitarity = std::max(unitarity_defect(phi.u), unitarity_defect(phi.v));
  const auto a = phi.alpha();
  const auto g = phi.gamma();
  d.commutation = std::max(l1_norm(commutator(a, g)), l1_norm(commutator(a, adjoint(g))));
  return d;
}

CoerciveQuadruple su2_from_matrix(double theta, int p, int q, int r, int s) {
  const long long det = static_cast<long long>(p) * s - static_cast<long long>(q) * r;
  if (det != 0) {
    throw PreconditionError("su2_from_matrix: need ps - qr = 0, got " + std::to_string(det));
  }
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, TorusElement::monomial(theta, p, q), TorusElement::monomial(theta, r, s)};
}

double su2_energy(const CoerciveQuadruple& phi) {
  return chiral_energy(phi.alpha()) + chiral_energy(phi.gamma());
}

std::pair<double, double> su2_constraint_residuals(const ConstraintPair& pair,
                                                   const CoerciveQuadruple& phi) {
  const auto a = phi.alpha();
  const auto g = phi.gamma();
  const auto gs = adjoint(g);
  const auto& A = pair.A;
  const auto& B = pair.B;
  const auto first = (mul(mul(a, A), g) - mul(mul(g, a), A)) - (mul(mul(g, B), a) - mul(mul(a, g), B));
  const auto second =
      (mul(mul(a, A), gs) - mul(mul(gs, a), A)) - (mul(mul(a, B), gs) - mul(mul(B, gs), a));
  return {l1_norm(first), l1_norm(second)};
}

TorusElement su2_solve_constraint_for_B(const TorusElement& A, const CoerciveQuadruple& phi,
                                        const Tolerance& tol) {
  const LatticePoint wu = require_monomial(phi.u, "su2_solve_constraint_for_B");
  const LatticePoint wv = require_monomial(phi.v, "su2_solve_constraint_for_B");
  if (cross(wu, wv.m, wv.n) != 0) {
    throw PreconditionError("su2_solve_constraint_for_B: images do not commute");
  }
  const double theta = A.theta();
  if (l1_norm(A - adjoint(A)) > tol.algebraic_eps * std::max(1.0, l1_norm(A))) {
    throw PreconditionError("su2_solve_constraint_for_B: A is not self-adjoint");
  }
  // Both equations reduce to A_k (conj chi_v - 1) = B_k (conj chi_u - 1).
  std::vector<Term> out;
  std::vector<std::pair<int, int>> bad;
  A.for_each_term([&](LatticePoint k, Complex c) {
    const bool u_fixes = fixes(theta, wu, k.m, k.n);
    const bool v_fixes = fixes(theta, wv, k.m, k.n);
    if (u_fixes) {
      if (!v_fixes && std::abs(c) > tol.algebraic_eps) bad.emplace_back(k.m, k.n);
      return;
    }
    const Complex num = std::conj(conj_phase(theta, wv, k.m, k.n)) - 1.0;
    const Complex den = std::conj(conj_phase(theta, wu, k.m, k.n)) - 1.0;
    out.push_back({k, c * num / den});
  });
  if (!bad.empty()) {
    throw InconsistentConstraint(offending_message("su2_solve_constraint_for_B", bad), bad);
  }
  auto B = TorusElement::from_terms(theta, out);
  if (l1_norm(B - adjoint(B)) > tol.algebraic_eps * std::max(1.0, l1_norm(B))) {
    throw PreconditionError("su2_solve_constraint_for_B: solution is not self-adjoint");
  }
  return B;
}

Complex su2_el_pairing(const ConstraintPair& pair, const CoerciveQuadruple& phi,
                       const Tolerance& tol) {
  const auto [r1, r2] = su2_constraint_residuals(pair, phi);
  if (r1 > tol.algebraic_eps || r2 > tol.algebraic_eps) {
    throw PreconditionError("su2_el_pairing: constraint residuals " + std::to_string(r1) + ", " +
                            std::to_string(r2));
  }
  return current_pairing(pair.A, phi.alpha()) + current_pairing(pair.B, phi.gamma());
}

namespace {

// Zeroes the coefficients of a self-adjoint sample on an index set closed
// under k -> -k, which keeps it self-adjoint.
template <class Drop>
TorusElement drop_indices(const TorusElement& a, Drop&& drop) {
  std::vector<Term> kept;
  a.for_each_term([&](LatticePoint k, Complex c) {
    if (!drop(k)) kept.push_back({k, c});
  });
  return TorusElement::from_terms(a.theta(), kept);
}

}  // namespace

std::vector<ConstraintPair> sample_endo_pairs(const EndoPair& phi, int count, std::uint64_t seed,
                                              int box) {
  const LatticePoint w = require_monomial(phi.phiU, "sample_endo_pairs");
  require_monomial(phi.phiV, "sample_endo_pairs");
  const double theta = phi.phiU.theta();
  std::vector<ConstraintPair> out;
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back({TorusElement(theta), TorusElement(theta)});
    } else if (i == 1) {
      const auto c = TorusElement::scalar(theta, 0.75);
      out.push_back({c, c});
    } else {
      const auto raw = random_selfadjoint(theta, box, seed + static_cast<std::uint64_t>(i));
      // Indices fixed by phiU need K = 0 there, i.e. phiV must fix them too.
      const LatticePoint wv = *monomial_index(phi.phiV);
      auto A = drop_indices(raw, [&](LatticePoint k) {
        return fixes(theta, w, k.m, k.n) && !fixes(theta, wv, k.m, k.n);
      });
      auto B = solve_constraint_for_B(A, phi);
      out.push_back({std::move(A), std::move(B)});
    }
  }
  return out;
}

std::vector<ConstraintPair> sample_su2_pairs(const CoerciveQuadruple& phi, int count,
                                             std::uint64_t seed, int box) {
  const LatticePoint wu = require_monomial(phi.u, "sample_su2_pairs");
  const LatticePoint wv = require_monomial(phi.v, "sample_su2_pairs");
  const double theta = phi.u.theta();
  std::vector<ConstraintPair> out;
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back({TorusElement(theta), TorusElement(theta)});
    } else if (i == 1) {
      const auto c = TorusElement::scalar(theta, -1.25);
      out.push_back({c, c});
    } else {
      const auto raw = random_selfadjoint(theta, box, seed + static_cast<std::uint64_t>(i));
      auto A = drop_indices(raw, [&](LatticePoint k) {
        return fixes(theta, wu, k.m, k.n) && !fixes(theta, wv, k.m, k.n);
      });
      auto B = su2_solve_constraint_for_B(A, phi);
      out.push_back({std::move(A), std::move(B)});
    }
  }
  return out;
}

// ---- variations -------------------------------------------------------------

Model parse_model(std::string_view name) {
  if (name == "chiral") return Model::chiral;
  if (name == "ising") return Model::ising;
  throw PreconditionError("unknown model: " + std::string(name));
}

std::string_view to_string(Model m) { return m == Model::chiral ? "chiral" : "ising"; }

namespace {

double varied_energy(Model model, const TorusElement& x, const TorusElement& h, double t) {
  if (model == Model::chiral) return chiral_energy(mul(exp_i(h, t), x));
  return ising_energy(mul(mul(exp_i(h, t), x), exp_i(h, -t)));
}

}  // namespace

FirstVariation first_variation_check(Model model, const TorusElement& x, const TorusElement& h,
                                     double step) {
  require_same_theta(x.theta(), h.theta(), "first_variation_check");
  FirstVariation out;
  if (h.is_zero()) return out;
  if (!(step > 0.0)) throw PreconditionError("first_variation_check: step must be positive");
  out.fd = (varied_energy(model, x, h, step) - varied_energy(model, x, h, -step)) / (2.0 * step);
  if (model == Model::chiral) {
    const auto G = mul(mul(x, chiral_defect(x)), adjoint(x));
    out.pairing = (2.0 * kI * trace_of_product(h, G)).real();
  } else {
    out.pairing = (-2.0 * kI * trace_of_product(h, ising_el_defect(x))).real();
  }
  return out;
}

DescentResult energy_descent(Model model, const TorusElement& x0, int steps, double rate,
                             const DescentOptions& opts) {
  if (model != Model::chiral) throw PreconditionError("energy_descent supports the chiral model only");
  if (steps < 0) throw PreconditionError("energy_descent: negative step count");
  DescentResult out;
  out.x = x0;
  double e = chiral_energy(x0);
  out.energy.push_back(e);
  if (rate == 0.0) {
    out.energy.resize(static_cast<std::size_t>(steps) + 1, e);
    return out;
  }
  const ExpOptions eopts{opts.drop_relative, opts.max_box};
  auto clip = [&](const TorusElement& a) {
    auto b = prune(a, opts.drop_relative).element;
    return opts.max_box > 0 ? truncate_to_box(b, opts.max_box).element : b;
  };
  int flat = 0;
  for (int it = 0; it < steps; ++it) {
    const auto G = mul(mul(out.x, chiral_defect(out.x)), adjoint(out.x));
    const auto g = (G - adjoint(G)) * kI;
    double r = rate;
    bool accepted = false;
    TorusElement trial;
    double e_trial = e;
    for (int k = 0; k <= opts.max_halvings; ++k, r *= 0.5) {
      trial = clip(mul(exp_i(g, -r, eopts), out.x));
      e_trial = chiral_energy(trial);
      if (e_trial <= e) {
        accepted = true;
        break;
      }
    }
    if (accepted) {
      out.x = std::move(trial);
    } else {
      ++out.line_search_failures;
      e_trial = e;
    }
    flat = (e_trial >= e) ? flat + 1 : 0;
    e = e_trial;
    out.energy.push_back(e);
    if (flat >= opts.stagnation_window) {
      out.stagnated = true;
      break;
    }
  }
  return out;
}

}  // namespace ncsigma
