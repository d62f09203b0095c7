#pragma once

// The Z^2 action x -> w x w^*, w = U^m V^n, on field data, and the monomial
// detector for unitaries.

#include <optional>

#include "ncsigma/sigma_models.hpp"
#include "ncsigma/torus_algebra.hpp"

namespace ncsigma {

/// w x w^* for w = U^m V^n; the coefficient at (a, b) picks up e^{2 pi i theta (m b - n a)}.
TorusElement ad(LatticePoint w, const TorusElement& x);
EndoPair ad_on_endo(LatticePoint w, const EndoPair& phi);
CoerciveQuadruple ad_on_coercive(LatticePoint w, const CoerciveQuadruple& phi);

/// Which logarithmic derivatives the detector examines.
enum class DetectorForm {
  star_left,   // w^* delta_j(w), scalars 2 pi i (m, n)
  star_right,  // w delta_j(w^*), scalars -2 pi i (m, n)
};

struct MonomialDetection {
  bool is_monomial = false;
  std::optional<LatticePoint> witness;
  Complex scalar1{0.0, 0.0};  // trace of the delta_1 log-derivative
  Complex scalar2{0.0, 0.0};
};

/// Unitarity is required to tol.truncation_eps (l1 defect), else PreconditionError.
MonomialDetection monomial_detector(const TorusElement& w, const Tolerance& tol = {},
                                    DetectorForm form = DetectorForm::star_left);

/// true iff v = lambda u with |lambda| = 1, tested through u^* v.
bool projective_equal(const TorusElement& u, const TorusElement& v, const Tolerance& tol = {});
/// Both images agree up to unit scalars.
bool endo_gauge_equal(const EndoPair& a, const EndoPair& b, const Tolerance& tol = {});
/// Same moduli |mu|, |nu| and projectively equal unitaries.
bool coercive_gauge_equal(const CoerciveQuadruple& a, const CoerciveQuadruple& b,
                          const Tolerance& tol = {});

}  // namespace ncsigma
