#include <gtest/gtest.h>

#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/sigma_models.hpp"
#include "ncsigma/symmetry.hpp"
#include "support/fixtures.hpp"

using namespace ncsigma;
using fixtures::unit_l1;

namespace {

class Seeded : public ::testing::TestWithParam<std::uint64_t> {
 protected:
  double theta() const { return 0.1 + 0.8 * static_cast<double>(GetParam() % 13) / 13.0; }
};

TEST_P(Seeded, AlgebraAxioms) {
  const double th = theta();
  const auto s = GetParam() * 3;
  const auto a = unit_l1(random_element(th, 3, s));
  const auto b = unit_l1(random_element(th, 3, s + 1));
  const auto c = unit_l1(random_element(th, 3, s + 2));
  EXPECT_LE(l1_norm(mul(mul(a, b), c) - mul(a, mul(b, c))), 1e-14);
  EXPECT_LE(l1_norm(adjoint(mul(a, b)) - mul(adjoint(b), adjoint(a))), 1e-14);
  EXPECT_LE(std::abs(trace(mul(a, b)) - trace(mul(b, a))), 1e-15);
  EXPECT_LE(l1_norm(adjoint(adjoint(a)) - a), 1e-15);
  for (int j = 1; j <= 2; ++j) {
    EXPECT_LE(l1_norm(delta(j, mul(a, b)) - mul(delta(j, a), b) - mul(a, delta(j, b))), 1e-12);
    EXPECT_LE(l1_norm(delta(j, adjoint(a)) - adjoint(delta(j, a))), 1e-13);
    EXPECT_EQ(trace(delta(j, a)), Complex(0.0));
  }
  // Positivity of the trace: tau(a* a) = sum |a_k|^2.
  const double g = gns_norm(a);
  EXPECT_NEAR(trace(mul(adjoint(a), a)).real(), g * g, 1e-15);
}

TEST_P(Seeded, NormInequalities) {
  const auto a = random_element(theta(), 3, GetParam());
  const auto b = random_element(theta(), 2, GetParam() + 77);
  EXPECT_LE(l1_norm(mul(a, b)), l1_norm(a) * l1_norm(b) * (1 + 1e-14));
  EXPECT_LE(gns_norm(a), l1_norm(a));
  EXPECT_LE(l1_norm(a + b), l1_norm(a) + l1_norm(b) + 1e-15);
}

TEST_P(Seeded, ConjugationInvariance) {
  const double th = theta();
  const auto u = fixtures::random_unitary(th, GetParam(), 1, -1);
  const LatticePoint w{static_cast<int>(GetParam() % 7) - 3, static_cast<int>(GetParam() % 5) - 2};
  const auto uw = ad(w, u);
  EXPECT_NEAR(chiral_energy(uw), chiral_energy(u), 1e-10);
  EXPECT_NEAR(chiral_residual(uw), chiral_residual(u), 1e-10);
  EXPECT_NEAR(unitarity_defect(uw), unitarity_defect(u), 1e-12);
}

TEST_P(Seeded, InnerProductAxioms) {
  const double th = 0.15 + 0.05 * static_cast<double>(GetParam() % 4);
  std::mt19937_64 rng(GetParam());
  const auto x = fixtures::random_gaussian(th, rng);
  const auto y = fixtures::random_gaussian(th, rng);
  const auto axy = inner_A(x, y).value;
  EXPECT_LE(gns_norm(axy - adjoint(inner_A(y, x).value)), 1e-8);
  const auto bxx = inner_B(x, x).value;
  EXPECT_NEAR(trace(bxx).real(), trace(inner_A(x, x).value).real() / th,
              1e-8 * trace(bxx).real());
  EXPECT_GT(trace(bxx).real(), 0.0);
  // Cauchy-Schwarz for the scalar part.
  EXPECT_LE(std::norm(trace(axy)), trace(inner_A(x, x).value).real() * trace(inner_A(y, y).value).real() *
                                       (1 + 1e-12));
}

TEST_P(Seeded, ConstraintSolverCertifies) {
  const double th = theta();
  const std::array<std::array<int, 4>, 4> mats{{{1, 0, 0, 1}, {1, 1, 0, 1}, {2, 1, 1, 1}, {1, -2, 0, 1}}};
  const auto& m = mats[GetParam() % mats.size()];
  const auto phi = endo_from_matrix(th, m[0], m[1], m[2], m[3]);
  for (const auto& pr : sample_endo_pairs(phi, 4, GetParam())) {
    EXPECT_LE(endo_constraint_residual(pr, phi), 1e-12);
    EXPECT_LE(std::abs(endo_el_pairing(pr, phi)), 1e-10);
  }
}

TEST_P(Seeded, UnitarityDefectOfOneMinusTwoP) {
  // (1 - 2p)^* (1 - 2p) - 1 = 4 (p^2 - p) for self-adjoint p.
  const auto p = random_selfadjoint(theta(), 2, GetParam()) * 0.25;
  const auto w = harmonic_from_projection(p);
  const auto lhs = mul(adjoint(w), w) - TorusElement::identity(p.theta());
  EXPECT_LE(l1_norm(lhs - (mul(p, p) - p) * 4.0), 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Range<std::uint64_t>(0, 24));

}  // namespace
