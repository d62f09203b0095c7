#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/sigma_models.hpp"
#include "ncsigma/symmetry.hpp"
#include "ncsigma/torus_algebra.hpp"

namespace fixtures {

using ncsigma::Complex;
using ncsigma::TorusElement;

inline const Complex kI(0.0, 1.0);

inline TorusElement unit_l1(TorusElement a) {
  const double s = ncsigma::l1_norm(a);
  return s > 0 ? a * (1.0 / s) : a;
}

/// e^{i h} U^m V^n with a small random self-adjoint h; not a scalar multiple of
/// a monomial.
inline TorusElement random_unitary(double theta, std::uint64_t seed, int m, int n,
                                   double scale = 0.15) {
  const auto h = ncsigma::random_selfadjoint(theta, 2, seed) * scale;
  return ncsigma::prune(ncsigma::mul(ncsigma::exp_i(h, 1.0), TorusElement::monomial(theta, m, n)))
      .element;
}

/// f(U) = a (U + U^*) + b (U^2 + U^-2), self-adjoint and commuting with U.
inline TorusElement function_of_u(double theta, double a, double b) {
  using ncsigma::TorusElement;
  return TorusElement::monomial(theta, 1, 0, a) + TorusElement::monomial(theta, -1, 0, a) +
         TorusElement::monomial(theta, 2, 0, b) + TorusElement::monomial(theta, -2, 0, b);
}

inline ncsigma::SchwartzVector random_gaussian(double theta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Complex c(0.5 + 0.5 * std::abs(u(rng)), 0.5 * u(rng));
  const Complex lambda(u(rng), 0.4 * u(rng));
  return ncsigma::SchwartzVector::gaussian(theta, c, lambda);
}

/// max that lets a NaN poison the result instead of vanishing.
inline double worst(double acc, double value) {
  if (std::isnan(value) || std::isnan(acc)) return std::numeric_limits<double>::infinity();
  return value > acc ? value : acc;
}

inline double trapezoid_l2(const ncsigma::SchwartzVector& xi, const ncsigma::GridSpec& grid) {
  double l2 = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    const double w = (k == 0 || k + 1 == grid.points) ? 0.5 : 1.0;
    l2 += w * std::norm(xi(grid.node(k)));
  }
  return l2 * grid.spacing();
}

}  // namespace fixtures
