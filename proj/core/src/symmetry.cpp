#include "ncsigma/symmetry.hpp"

#include <cmath>

#include "twist.hpp"

namespace ncsigma {

TorusElement ad(LatticePoint w, const TorusElement& x) {
  if (w.m == 0 && w.n == 0) return x;
  std::vector<Complex> data = x.dense();
  const double theta = x.theta();
  for (int i = 0; i < x.rows(); ++i) {
    const long long a = x.m_lo() + i;
    for (int j = 0; j < x.cols(); ++j) {
      const long long b = x.n_lo() + j;
      auto& c = data[static_cast<std::size_t>(i) * x.cols() + j];
      if (c != Complex(0.0)) c *= detail::twist_phase(theta, w.m * b - w.n * a);
    }
  }
  return TorusElement::from_dense(theta, x.m_lo(), x.n_lo(), x.rows(), x.cols(), std::move(data));
}

EndoPair ad_on_endo(LatticePoint w, const EndoPair& phi) {
  return {ad(w, phi.phiU), ad(w, phi.phiV)};
}

CoerciveQuadruple ad_on_coercive(LatticePoint w, const CoerciveQuadruple& phi) {
  return {phi.mu, phi.nu, ad(w, phi.u), ad(w, phi.v)};
}

MonomialDetection monomial_detector(const TorusElement& w, const Tolerance& tol,
                                    DetectorForm form) {
  const double defect = unitarity_defect(w);
  if (defect > tol.truncation_eps) {
    throw PreconditionError("monomial_detector: input is not unitary (defect " +
                            std::to_string(defect) + ")");
  }
  MonomialDetection out;
  const auto ws = adjoint(w);
  TorusElement log1, log2;
  if (form == DetectorForm::star_left) {
    log1 = mul(ws, delta(1, w));
    log2 = mul(ws, delta(2, w));
  } else {
    log1 = mul(w, delta(1, ws));
    log2 = mul(w, delta(2, ws));
  }
  out.scalar1 = trace(log1);
  out.scalar2 = trace(log2);
  if (!is_scalar(log1, tol) || !is_scalar(log2, tol)) return out;

  // The scalars are 2 pi i times the exponents (negated for star_right) and
  // must be purely imaginary.
  const double sign = form == DetectorForm::star_left ? 1.0 : -1.0;
  const double x1 = sign * out.scalar1.imag() / kTwoPi;
  const double x2 = sign * out.scalar2.imag() / kTwoPi;
  const double slack = tol.algebraic_eps * std::max({1.0, std::abs(x1), std::abs(x2)});
  if (std::abs(out.scalar1.real()) > kTwoPi * slack || std::abs(out.scalar2.real()) > kTwoPi * slack)
    return out;
  const double m = std::nearbyint(x1);
  const double n = std::nearbyint(x2);
  if (std::abs(x1 - m) > slack || std::abs(x2 - n) > slack) return out;
  out.is_monomial = true;
  out.witness = LatticePoint{static_cast<int>(m), static_cast<int>(n)};
  return out;
}

bool projective_equal(const TorusElement& u, const TorusElement& v, const Tolerance& tol) {
  require_same_theta(u.theta(), v.theta(), "projective_equal");
  const auto x = mul(adjoint(u), v);
  if (!is_scalar(x, tol)) return false;
  return std::abs(std::abs(trace(x)) - 1.0) <= tol.algebraic_eps;
}

bool endo_gauge_equal(const EndoPair& a, const EndoPair& b, const Tolerance& tol) {
  return projective_equal(a.phiU, b.phiU, tol) && projective_equal(a.phiV, b.phiV, tol);
}

bool coercive_gauge_equal(const CoerciveQuadruple& a, const CoerciveQuadruple& b,
                          const Tolerance& tol) {
  return std::abs(std::abs(a.mu) - std::abs(b.mu)) <= tol.algebraic_eps &&
         std::abs(std::abs(a.nu) - std::abs(b.nu)) <= tol.algebraic_eps &&
         projective_equal(a.u, b.u, tol) && projective_equal(a.v, b.v, tol);
}

}  // namespace ncsigma
