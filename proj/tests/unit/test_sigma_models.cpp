#include <gtest/gtest.h>

#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/sigma_models.hpp"
#include "support/fixtures.hpp"

using namespace ncsigma;

namespace {

constexpr double kTheta = 0.2;
const Complex kI(0.0, 1.0);
const double k4Pi2 = 4 * kPi * kPi;

const TorusElement& instanton_p() {
  static const TorusElement p = instanton(kTheta, 0.0, Tolerance{}, 32).projection;
  return p;
}

TorusElement mono(int m, int n, Complex c = 1.0) { return TorusElement::monomial(kTheta, m, n, c); }

TEST(Ising, Constants) {
  EXPECT_EQ(ising_energy(TorusElement(kTheta)), 0.0);
  EXPECT_EQ(ising_energy(TorusElement::identity(kTheta)), 0.0);
  EXPECT_EQ(ising_el_residual(TorusElement(kTheta)), 0.0);
  EXPECT_EQ(chern_number(TorusElement(kTheta)), 0.0);
  EXPECT_EQ(chern_number(TorusElement::identity(kTheta)), 0.0);
  EXPECT_EQ(self_duality_residual(TorusElement(kTheta)), 0.0);
}

TEST(Ising, InstantonSatisfiesBound) {
  const auto& p = instanton_p();
  const double sd = ising_energy(p);
  const double c1 = chern_number(p);
  EXPECT_GE(sd + kTwoPi * c1, -1e-3);
  EXPECT_LE(ising_el_residual(p), 1e-8);
  // The Gaussian projection solves the anti-holomorphic equation here; the
  // holomorphic one fails at order one.
  EXPECT_LE(anti_self_duality_residual(p), 1e-8);
  EXPECT_GT(self_duality_residual(p), 1.0);
  EXPECT_NEAR(sd, 4 * kPi, 1e-6);
}

TEST(Ising, PerturbedProjectionIsNotCritical) {
  const auto& p = instanton_p();
  const auto h = random_selfadjoint(kTheta, 1, 5) * 0.05;
  EXPECT_GT(ising_el_residual(p + h), 1e-3);
}

TEST(Ising, BoundOnConjugatedProjections) {
  // Conjugates of a projection by unitaries are projections with the same c1.
  const auto& p = instanton_p();
  for (std::uint64_t s = 0; s < 2; ++s) {
    const auto u = fixtures::random_unitary(kTheta, s, 0, 0, 0.1);
    const auto q = prune(mul(mul(u, truncate_to_box(p, 16).element), adjoint(u))).element;
    EXPECT_GE(ising_energy(q) + kTwoPi * chern_number(q), -1e-3);
    EXPECT_NEAR(chern_number(q), -1.0, 1e-4);
  }
}

TEST(Chiral, MonomialEnergies) {
  for (int m = -5; m <= 5; ++m) {
    for (int n = -5; n <= 5; ++n) {
      EXPECT_NEAR(chiral_energy(mono(m, n)), k4Pi2 * (m * m + n * n), 1e-12);
      EXPECT_LE(chiral_residual(mono(m, n)), 1e-12);
    }
  }
  EXPECT_NEAR(chiral_energy(mono(1, 2)), k4Pi2 * 5, 1e-12);
}

TEST(Chiral, GaugeInvariance) {
  const auto w = fixtures::random_unitary(kTheta, 4, 1, 0);
  const Complex ph = std::polar(1.0, 1.1);
  EXPECT_NEAR(chiral_energy(w * ph), chiral_energy(w), 1e-12);
  EXPECT_NEAR(chiral_residual(w * ph), chiral_residual(w), 1e-12);
}

TEST(Chiral, PerturbedMonomialIsNotHarmonic) {
  EXPECT_GT(chiral_residual(fixtures::random_unitary(kTheta, 2, 1, 0)), 1e-2);
}

TEST(Chiral, HarmonicFromProjection) {
  EXPECT_EQ(harmonic_from_projection(TorusElement(kTheta)), TorusElement::identity(kTheta));
  EXPECT_EQ(harmonic_from_projection(TorusElement::identity(kTheta)), -TorusElement::identity(kTheta));
  const auto p = random_selfadjoint(kTheta, 2, 9) * 0.3;
  const auto w = harmonic_from_projection(p);
  const double pd = l1_norm(mul(p, p) - p);
  EXPECT_NEAR(unitarity_defect(w), 4 * pd, 1e-12 * std::max(1.0, pd));
}

TEST(Chiral, DefectIdentityForProjections) {
  // chiral_defect(1 - 2p) - 2 (p Lap p - Lap p p) = 2 Lap(p^2 - p)
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto p = random_selfadjoint(kTheta, 2, s);
    const auto lhs = chiral_defect(harmonic_from_projection(p)) - ising_el_defect(p) * 2.0;
    const auto rhs = laplacian(mul(p, p) - p) * 2.0;
    EXPECT_LE(l1_norm(lhs - rhs), 1e-10 * std::max(1.0, l1_norm(rhs)));
  }
  const auto w = harmonic_from_projection(instanton_p());
  EXPECT_LE(chiral_residual(w), 1e-4);
  EXPECT_LE(chiral_residual(w), 2 * ising_el_residual(instanton_p()) + 1e-10);
}

TEST(Chiral, EnergyOfHarmonicUnitaryIsFourTimesIsing) {
  const auto& p = instanton_p();
  EXPECT_NEAR(chiral_energy(harmonic_from_projection(p)), 4 * ising_energy(p), 1e-9);
}

TEST(Endo, FromMatrix) {
  const auto id = endo_from_matrix(kTheta, 1, 0, 0, 1);
  EXPECT_EQ(id.phiU, mono(1, 0));
  EXPECT_EQ(id.phiV, mono(0, 1));
  const auto t = endo_from_matrix(kTheta, 1, 1, 0, 1);
  EXPECT_EQ(t.phiU, mono(1, 1));
  EXPECT_LE(endo_relation_residual(t), 1e-15);
  EXPECT_LE(endo_unitarity_defect(t), 1e-15);
  EXPECT_THROW(endo_from_matrix(kTheta, 1, 0, 0, -1), PreconditionError);
  EXPECT_NEAR(endo_energy(endo_from_matrix(kTheta, 2, 1, 1, 1)), k4Pi2 * (5 + 2), 1e-11);
}

TEST(Endo, ConstraintResidualExamples) {
  const auto phi = endo_from_matrix(kTheta, 2, 1, 1, 1);
  const auto c = TorusElement::scalar(kTheta, 0.4);
  EXPECT_LE(endo_constraint_residual({c, c}, phi), 1e-15);
  EXPECT_EQ(endo_constraint_residual({TorusElement(kTheta), TorusElement(kTheta)}, phi), 0.0);
  for (const auto& pr : sample_endo_pairs(phi, 10, 3)) {
    EXPECT_LE(endo_constraint_residual(pr, phi), 1e-12);
  }
}

TEST(Endo, SolverExamples) {
  const auto id = endo_from_matrix(kTheta, 1, 0, 0, 1);
  EXPECT_TRUE(solve_constraint_for_B(TorusElement::scalar(kTheta, 2.0), id).is_zero());
  const auto uv = mono(1, 1);
  const auto A = uv + adjoint(uv);
  const auto B = solve_constraint_for_B(A, id);
  EXPECT_LE(endo_constraint_residual({A, B}, id), 1e-12);
  EXPECT_LE(l1_norm(B - adjoint(B)), 1e-14);
}

TEST(Endo, SolverReportsNullLatticeObstruction) {
  const auto id = endo_from_matrix(kTheta, 1, 0, 0, 1);
  const auto A = mono(1, 0) + mono(-1, 0);
  try {
    solve_constraint_for_B(A, id);
    FAIL() << "expected InconsistentConstraint";
  } catch (const InconsistentConstraint& e) {
    std::vector<std::pair<int, int>> want{{-1, 0}, {1, 0}};
    auto got = e.offending();
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want);
  }
  EXPECT_THROW(solve_constraint_for_B(mono(1, 1), id), PreconditionError);
}

TEST(Endo, ResonantIndicesAtRationalTheta) {
  // At theta = 1/5, conjugation by U fixes U^a V^b whenever 5 | b.
  const auto id = endo_from_matrix(0.2, 1, 0, 0, 1);
  const auto A = TorusElement::monomial(0.2, 1, 5) + adjoint(TorusElement::monomial(0.2, 1, 5));
  EXPECT_THROW(solve_constraint_for_B(A, id), InconsistentConstraint);
  for (const auto& pr : sample_endo_pairs(endo_from_matrix(0.2, 2, 1, 1, 1), 10, 1)) {
    EXPECT_TRUE(std::isfinite(l1_norm(pr.B)));
    EXPECT_LE(endo_constraint_residual(pr, endo_from_matrix(0.2, 2, 1, 1, 1)), 1e-12);
  }
}

TEST(Endo, PairingVanishesOnMonomialMaps) {
  for (auto [p, q, r, s] : std::vector<std::array<int, 4>>{{1, 0, 0, 1}, {1, 1, 0, 1}, {0, -1, 1, 0}}) {
    const auto phi = endo_from_matrix(kTheta, p, q, r, s);
    for (const auto& pr : sample_endo_pairs(phi, 10, 7)) {
      EXPECT_LE(std::abs(endo_el_pairing(pr, phi)), 1e-10);
    }
  }
}

TEST(Endo, PairingDetectsNonHarmonicMap) {
  // (U, e^{i f(U)} V) is an endomorphism; (A, B) = (0, f(U)) satisfies the constraint.
  const auto f = fixtures::function_of_u(kTheta, 0.3, 0.1);
  const EndoPair phi{mono(1, 0), prune(mul(exp_i(f, 1.0), mono(0, 1))).element};
  EXPECT_LE(endo_relation_residual(phi), 1e-12);
  EXPECT_LE(endo_unitarity_defect(phi), 1e-12);
  const ConstraintPair pr{TorusElement(kTheta), f};
  EXPECT_LE(endo_constraint_residual(pr, phi), 1e-12);
  EXPECT_GT(std::abs(endo_el_pairing(pr, phi)), 1e-2);
  EXPECT_EQ(endo_el_pairing({TorusElement(kTheta), TorusElement(kTheta)}, phi), Complex(0.0));
}

TEST(Endo, PairingRejectsUnconstrainedPair) {
  const auto phi = endo_from_matrix(kTheta, 1, 1, 0, 1);
  const auto a = random_selfadjoint(kTheta, 2, 3);
  EXPECT_THROW(endo_el_pairing({a, a}, phi), PreconditionError);
}

TEST(Su2, FromMatrix) {
  const auto q = su2_from_matrix(kTheta, 1, 0, 2, 0);
  EXPECT_LE(l1_norm(q.alpha() - mono(1, 0, 1 / std::sqrt(2.0))), 1e-16);
  EXPECT_LE(l1_norm(q.gamma() - mono(2, 0, 1 / std::sqrt(2.0))), 1e-16);
  const auto d = coercive_defects(q);
  EXPECT_LE(d.modulus, 1e-15);
  EXPECT_EQ(d.unitarity, 0.0);
  EXPECT_EQ(d.commutation, 0.0);
  const auto e = su2_from_matrix(kTheta, 1, 1, 1, 1);
  EXPECT_EQ(e.alpha(), e.gamma());
  EXPECT_THROW(su2_from_matrix(kTheta, 1, 0, 0, 1), PreconditionError);
}

TEST(Su2, Energy) {
  EXPECT_NEAR(su2_energy(su2_from_matrix(kTheta, 1, 0, 2, 0)), 10 * kPi * kPi, 1e-12);
  const CoerciveQuadruple trivial{1.0, 0.0, TorusElement::identity(kTheta), TorusElement::identity(kTheta)};
  EXPECT_EQ(su2_energy(trivial), 0.0);
  const auto q = su2_from_matrix(kTheta, 1, 1, 2, 2);
  const CoerciveQuadruple g{q.mu * std::polar(1.0, 0.4), q.nu * std::polar(1.0, -2.0), q.u, q.v};
  EXPECT_NEAR(su2_energy(g), su2_energy(q), 1e-12);
}

TEST(Su2, ConstraintResiduals) {
  const auto q = su2_from_matrix(kTheta, 1, 1, 2, 2);
  const auto z = su2_constraint_residuals({TorusElement(kTheta), TorusElement(kTheta)}, q);
  EXPECT_EQ(z.first, 0.0);
  EXPECT_EQ(z.second, 0.0);
  const auto c = TorusElement::scalar(kTheta, 1.5);
  const auto s = su2_constraint_residuals({c, c}, q);
  EXPECT_LE(s.first, 1e-15);
  EXPECT_LE(s.second, 1e-15);
  const auto a = random_selfadjoint(kTheta, 2, 8);
  const auto r = su2_constraint_residuals({a, a}, q);
  EXPECT_GT(std::max(r.first, r.second), 1e-3);
}

TEST(Su2, SolverAndPairing) {
  for (auto [p, qq, r, s] : std::vector<std::array<int, 4>>{{1, 0, 2, 0}, {1, 1, 2, 2}, {0, 1, 0, -1}}) {
    const auto phi = su2_from_matrix(kTheta, p, qq, r, s);
    for (const auto& pr : sample_su2_pairs(phi, 10, 4)) {
      const auto [r1, r2] = su2_constraint_residuals(pr, phi);
      EXPECT_LE(std::max(r1, r2), 1e-12);
      EXPECT_LE(std::abs(su2_el_pairing(pr, phi)), 1e-10);
    }
  }
}

TEST(Su2, SolverReportsObstruction) {
  // u = 1 fixes every index while v = U does not.
  const auto phi = su2_from_matrix(kTheta, 0, 0, 1, 0);
  const auto A = mono(0, 1) + mono(0, -1);
  EXPECT_THROW(su2_solve_constraint_for_B(A, phi), InconsistentConstraint);
  const CoerciveQuadruple nc{1.0, 0.0, mono(1, 0), mono(0, 1)};
  EXPECT_THROW(su2_solve_constraint_for_B(TorusElement::scalar(kTheta, 1.0), nc), PreconditionError);
}

TEST(Su2, PairingDetectsPerturbedMap) {
  const double h = 1 / std::sqrt(2.0);
  const auto f = fixtures::function_of_u(kTheta, 0.25, -0.1);
  const CoerciveQuadruple phi{h, h, prune(mul(exp_i(f, 1.0), mono(1, 0))).element, mono(2, 0)};
  const auto d = coercive_defects(phi);
  EXPECT_LE(std::max({d.modulus, d.unitarity, d.commutation}), 1e-12);
  const ConstraintPair pr{f, fixtures::function_of_u(kTheta, -0.2, 0.05)};
  const auto [r1, r2] = su2_constraint_residuals(pr, phi);
  EXPECT_LE(std::max(r1, r2), 1e-12);
  EXPECT_GT(std::abs(su2_el_pairing(pr, phi)), 1e-2);
}

TEST(FirstVariation, Examples) {
  const auto h = random_selfadjoint(kTheta, 2, 1) * 0.3;
  const auto fm = first_variation_check(Model::chiral, mono(2, -1), h, 1e-3);
  EXPECT_LE(std::abs(fm.fd), 1e-8);
  EXPECT_LE(std::abs(fm.pairing), 1e-8);
  const auto z = first_variation_check(Model::chiral, mono(1, 0), TorusElement(kTheta), 1e-3);
  EXPECT_EQ(z.fd, 0.0);
  EXPECT_THROW(first_variation_check(Model::chiral, mono(1, 0), h, 0.0), PreconditionError);
}

TEST(FirstVariation, SecondOrderDecay) {
  const auto w = fixtures::random_unitary(kTheta, 6, 0, 1);
  const auto h = random_selfadjoint(kTheta, 2, 7) * 0.3;
  double prev = -1.0;
  for (double step : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const auto fv = first_variation_check(Model::chiral, w, h, step);
    const double err = std::abs(fv.fd - fv.pairing);
    if (prev > 0) EXPECT_GE(prev / err, 3.5);
    prev = err;
  }
}

TEST(FirstVariation, IsingModel) {
  const auto p = instanton(kTheta, 0.0, Tolerance{}, 16, false).projection;
  const auto h = random_selfadjoint(kTheta, 1, 2) * 0.3;
  const auto fv = first_variation_check(Model::ising, p, h, 1e-3);
  EXPECT_NEAR(fv.fd, fv.pairing, 1e-4);
  EXPECT_EQ(parse_model("ising"), Model::ising);
  EXPECT_EQ(to_string(Model::chiral), "chiral");
  EXPECT_THROW(parse_model("xy"), PreconditionError);
}

TEST(Descent, Examples) {
  const auto run = energy_descent(Model::chiral, mono(1, 0), 5, 1e-3);
  for (double e : run.energy) EXPECT_NEAR(e, k4Pi2, 1e-8);
  const auto still = energy_descent(Model::chiral, fixtures::random_unitary(kTheta, 1, 1, 0), 4, 0.0);
  ASSERT_EQ(still.energy.size(), 5u);
  for (double e : still.energy) EXPECT_EQ(e, still.energy.front());
  EXPECT_THROW(energy_descent(Model::ising, mono(1, 0), 1, 1e-3), PreconditionError);
}

TEST(Descent, PerturbedHarmonicUnitaryDoesNotIncrease) {
  const auto p = truncate_to_box(instanton(kTheta, 0.0, Tolerance{}, 16, false).projection, 9).element;
  const auto h = random_selfadjoint(kTheta, 1, 4) * 0.05;
  const auto w0 = prune(mul(exp_i(h, 1.0), harmonic_from_projection(p))).element;
  const auto run = energy_descent(Model::chiral, w0, 6, 1e-3);
  for (std::size_t i = 1; i < run.energy.size(); ++i) EXPECT_LE(run.energy[i], run.energy[i - 1]);
  EXPECT_LT(run.energy.back(), run.energy.front());
}

}  // namespace
