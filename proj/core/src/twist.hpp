#pragma once

#include <cmath>
#include <complex>

namespace ncsigma::detail {

/// e^{2 pi i theta k}, with theta*k reduced modulo 1 before the exponential.
inline std::complex<double> twist_phase(double theta, long long k) {
  if (k == 0) return {1.0, 0.0};
  const double x = theta * static_cast<double>(k);
  const double r = x - std::nearbyint(x);
  constexpr double two_pi = 6.28318530717958647692;
  return std::polar(1.0, two_pi * r);
}

}  // namespace ncsigma::detail
