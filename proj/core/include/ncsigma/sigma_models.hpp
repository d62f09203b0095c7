#pragma once

// Energy functionals on A_theta, their Euler-Lagrange residuals and the
// constraint machinery for the endomorphism and coercive models.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "ncsigma/torus_algebra.hpp"

namespace ncsigma {

// ---- two-point (projection) model -------------------------------------------

/// S_D(p) = tau(delta_1(p)^2 + delta_2(p)^2).
double ising_energy(const TorusElement& p);
/// p (Delta p) - (Delta p) p
TorusElement ising_el_defect(const TorusElement& p);
double ising_el_residual(const TorusElement& p);
/// (1 / 2 pi i) tau(p [delta_1 p, delta_2 p]), real part.
double chern_number(const TorusElement& p);
/// gns norm of 1/2 (delta_1 p + i delta_2 p) p.
double self_duality_residual(const TorusElement& p);
/// gns norm of 1/2 (delta_1 p - i delta_2 p) p.
double anti_self_duality_residual(const TorusElement& p);

struct ProjectionDefects {
  double idempotent = 0.0;    // ||p^2 - p||_gns
  double self_adjoint = 0.0;  // ||p - p*||_gns
};
ProjectionDefects projection_defects(const TorusElement& p);

// ---- chiral model -----------------------------------------------------------

/// L_D(W) = tau(sum_j delta_j(W)^* delta_j(W)); E(W) = L_D / 2.
double chiral_energy(const TorusElement& w);
/// W^* Delta W + sum_j delta_j(W)^* delta_j(W)
TorusElement chiral_defect(const TorusElement& w);
double chiral_residual(const TorusElement& w);
/// 1 - 2p
TorusElement harmonic_from_projection(const TorusElement& p);

// ---- torus endomorphisms ----------------------------------------------------

struct EndoPair {
  TorusElement phiU;
  TorusElement phiV;
};

/// Self-adjoint test elements for the constrained variations.
struct ConstraintPair {
  TorusElement A;
  TorusElement B;
};

/// (U^p V^q, U^r V^s); requires ps - qr = 1.
EndoPair endo_from_matrix(double theta, int p, int q, int r, int s);
/// ||phiU phiV - e^{2 pi i theta} phiV phiU||_l1
double endo_relation_residual(const EndoPair& phi);
/// Largest unitarity defect of the two images.
double endo_unitarity_defect(const EndoPair& phi);
/// sum_j tau(delta_j(phiU)^* delta_j(phiU) + delta_j(phiV)^* delta_j(phiV))
double endo_energy(const EndoPair& phi);
/// ||(A - phiV^* A phiV) - (B - phiU^* B phiU)||_l1
double endo_constraint_residual(const ConstraintPair& pair, const EndoPair& phi);
/// Solves B - phiU^* B phiU = A - phiV^* A phiV for monomial phiU. Throws
/// InconsistentConstraint when the right side has mass on the null lattice of
/// phiU-conjugation.
TorusElement solve_constraint_for_B(const TorusElement& A, const EndoPair& phi,
                                    const Tolerance& tol = {});
/// sum_j tau(A delta_j[phiU^* delta_j phiU]) + tau(B delta_j[phiV^* delta_j phiV]).
/// Throws PreconditionError when the pair violates the constraint.
Complex endo_el_pairing(const ConstraintPair& pair, const EndoPair& phi, const Tolerance& tol = {});

// ---- coercive maps of the q = 1 quantum group ------------------------------

struct CoerciveQuadruple {
  Complex mu{1.0, 0.0};
  Complex nu{0.0, 0.0};
  TorusElement u;
  TorusElement v;

  TorusElement alpha() const { return u * mu; }
  TorusElement gamma() const { return v * nu; }
};

struct CoerciveDefects {
  double modulus = 0.0;      // | |mu|^2 + |nu|^2 - 1 |
  double unitarity = 0.0;    // max of the unitarity defects of u, v
  double commutation = 0.0;  // max of ||[phi(alpha), phi(gamma)]||, ||[phi(alpha), phi(gamma)^*]||
};
CoerciveDefects coercive_defects(const CoerciveQuadruple& phi);

/// mu = nu = 1/sqrt 2, u = U^p V^q, v = U^r V^s; requires ps - qr = 0.
CoerciveQuadruple su2_from_matrix(double theta, int p, int q, int r, int s);
double su2_energy(const CoerciveQuadruple& phi);
std::pair<double, double> su2_constraint_residuals(const ConstraintPair& pair,
                                                   const CoerciveQuadruple& phi);
/// Solves both constraint equations for B given A when u and v are monomials.
TorusElement su2_solve_constraint_for_B(const TorusElement& A, const CoerciveQuadruple& phi,
                                        const Tolerance& tol = {});
Complex su2_el_pairing(const ConstraintPair& pair, const CoerciveQuadruple& phi,
                       const Tolerance& tol = {});

/// Zero pair, a scalar pair, then solver-generated pairs from random A with
/// support in [-box, box]^2. Requires monomial images.
std::vector<ConstraintPair> sample_endo_pairs(const EndoPair& phi, int count, std::uint64_t seed,
                                              int box = 3);
std::vector<ConstraintPair> sample_su2_pairs(const CoerciveQuadruple& phi, int count,
                                             std::uint64_t seed, int box = 3);

// ---- variations -------------------------------------------------------------

enum class Model { chiral, ising };
Model parse_model(std::string_view name);
std::string_view to_string(Model m);

struct FirstVariation {
  double fd = 0.0;       // centered difference of the energy at t = 0
  double pairing = 0.0;  // analytic derivative from the EL defect
};

/// chiral: W_t = e^{i t h} W, pairing = Re(2i tau(h W R W^*)), R = chiral_defect(W).
/// ising:  p_t = e^{i t h} p e^{-i t h}, pairing = Re(-2i tau(h (p Delta p - Delta p p))).
FirstVariation first_variation_check(Model model, const TorusElement& x, const TorusElement& h,
                                     double step);

struct DescentOptions {
  int max_box = 12;
  double drop_relative = 1e-16;
  int max_halvings = 12;
  int stagnation_window = 5;
};

struct DescentResult {
  TorusElement x;
  std::vector<double> energy;  // energy[0] is the starting value
  int line_search_failures = 0;
  bool stagnated = false;
};

/// Chiral gradient flow x <- e^{-i rate g} x with g = i(G - G^*), G = x R x^*.
/// Only Model::chiral is supported.
DescentResult energy_descent(Model model, const TorusElement& x0, int steps, double rate,
                             const DescentOptions& opts = {});

}  // namespace ncsigma
