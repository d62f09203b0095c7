#pragma once

// The (A_theta, A_{-1/theta}) equivalence bimodule Xi = S(R).
//
// Actions (t real):
//   (U xi)(t)   = xi(t + 1)            (V xi)(t)   = e^{2 pi i theta t} xi(t)
//   (xi U1)(t)  = xi(t + 1/theta)      (xi V1)(t)  = e^{2 pi i t} xi(t)
// so that UV = e^{2 pi i theta} VU and U1 V1 = e^{-2 pi i / theta} V1 U1, and
// the two actions commute.
//
// Inner products, with c_A = 1 and c_B = 1/|theta|:
//   (_A<xi, eta>)_{m,n} = c_A int xi(t) conj((U^m V^n eta)(t)) dt
//   (<xi, eta>_B)_{m,n} = c_B int conj((xi U1^m V1^n)(t)) eta(t) dt
// These satisfy _A<xi, eta> zeta = xi <eta, zeta>_B and
// tau_B(<eta, eta>_B) = tau_A(_A<eta, eta>) / |theta|.

#include <functional>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ncsigma/torus_algebra.hpp"

namespace ncsigma {

/// Element of A_{-1/theta}; the theta tag holds dual_theta(theta).
using DualTorusElement = TorusElement;

inline double dual_theta(double theta) { return -1.0 / theta; }

/// Uniform grid t_k = -L + k * 2L / (points - 1).
struct GridSpec {
  double half_width = 20.0;
  int points = 4001;

  double spacing() const { return 2.0 * half_width / (points - 1); }
  double node(int k) const { return -half_width + k * spacing(); }
  void validate() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// xi(t) = amplitude * e^{log_scale} * e^{-pi theta t^2 - 2 i lambda t}.
///
/// `log_scale` absorbs the real part of constants picked up under large
/// translations, which would otherwise underflow the amplitude.
struct GaussianProfile {
  Complex amplitude{1.0, 0.0};
  Complex lambda{0.0, 0.0};
  double log_scale = 0.0;
};

struct SampledProfile {
  GridSpec grid;
  std::vector<Complex> values;
};

class SchwartzVector {
 public:
  /// Requires theta > 0.
  static SchwartzVector gaussian(double theta, Complex amplitude, Complex lambda);
  static SchwartzVector gaussian(double theta, const GaussianProfile& profile);
  static SchwartzVector sampled(double theta, GridSpec grid, std::vector<Complex> values);
  static SchwartzVector sample(double theta, const GridSpec& grid,
                               const std::function<Complex(double)>& f);

  double theta() const { return theta_; }
  bool is_gaussian() const { return std::holds_alternative<GaussianProfile>(kind_); }
  const GaussianProfile& as_gaussian() const { return std::get<GaussianProfile>(kind_); }
  const SampledProfile& as_sampled() const { return std::get<SampledProfile>(kind_); }
  bool is_zero() const;

  /// Point evaluation; sampled vectors use 10-point Lagrange interpolation and
  /// vanish outside their grid.
  Complex operator()(double t) const;

  SchwartzVector to_sampled(const GridSpec& grid) const;
  /// t -> xi(t + s)
  SchwartzVector translated(double s) const;
  /// t -> e^{2 pi i f t} xi(t)
  SchwartzVector modulated(double f) const;
  SchwartzVector scaled(Complex c) const;

 private:
  SchwartzVector(double theta, std::variant<GaussianProfile, SampledProfile> k)
      : theta_(theta), kind_(std::move(k)) {}

  double theta_ = 0.0;
  std::variant<GaussianProfile, SampledProfile> kind_;
};

/// max_k |x(t_k) - y(t_k)| over `grid`.
double grid_distance(const SchwartzVector& x, const SchwartzVector& y, const GridSpec& grid = {});
/// max_k |x(t_k)| over `grid`.
double grid_max(const SchwartzVector& x, const GridSpec& grid = {});

/// Left action of A_theta. Monomials keep a Gaussian closed form; anything
/// else is evaluated on `grid` (or on the vector's own grid when sampled).
SchwartzVector act_left(const TorusElement& a, const SchwartzVector& xi, const GridSpec& grid = {});
/// Right action of A_{-1/theta}; same closure rules as act_left.
SchwartzVector act_right(const SchwartzVector& xi, const DualTorusElement& b,
                         const GridSpec& grid = {});

double inner_a_normalization(double theta);
double inner_b_normalization(double theta);

struct InnerProductOptions {
  int box = 32;                              // coefficients with max(|m|,|n|) <= box
  int tail_shell = 4;                        // width of the ring used for the tail estimate
  double drop_relative = kDefaultDropRelative;
  bool strict = true;                        // throw TruncationError on tail > truncation_eps
  Tolerance tol{};
};

struct InnerProduct {
  TorusElement value;
  /// l1 mass of the coefficients in box < max(|m|,|n|) <= box + tail_shell.
  double tail_mass = 0.0;
  /// l1 mass removed by pruning inside the box.
  double pruned_mass = 0.0;
};

/// Gaussian x Gaussian pairs use closed-form integrals; anything involving a
/// sampled vector uses the trapezoidal rule on that vector's grid.
InnerProduct inner_A(const SchwartzVector& xi, const SchwartzVector& eta,
                     const InnerProductOptions& opts = {});
InnerProduct inner_B(const SchwartzVector& xi, const SchwartzVector& eta,
                     const InnerProductOptions& opts = {});
/// _A<xi c, eta> for Gaussian xi, eta and c in A_{-1/theta}, summed term by
/// term in closed form.
InnerProduct inner_A_dressed(const SchwartzVector& xi, const DualTorusElement& c,
                             const SchwartzVector& eta, const InnerProductOptions& opts = {});

struct InversionOptions {
  int max_iterations = 100;
  int divergence_window = 3;
  int polish_steps = 2;
  double drop_relative = kDefaultDropRelative;
};

struct Inversion {
  TorusElement inverse;
  int iterations = 0;
  double residual = 0.0;          // ||b x - 1||_l1
  std::vector<double> history;    // residual before each update
};

/// Newton-Schulz x <- x (2 - b x) from x0 = 1 / tau(b). Throws InversionError
/// when the l1 residual grows for `divergence_window` consecutive steps or the
/// iteration budget runs out.
Inversion invert_positive(const TorusElement& b, const Tolerance& tol,
                          const InversionOptions& opts = {});

struct Instanton {
  double theta = 0.0;
  Complex lambda{0.0, 0.0};
  int box = 0;
  TorusElement projection;     // p = _A<xi b^{-1}, xi>
  DualTorusElement gram;       // b = <xi, xi>_B
  Inversion inversion;
  double tail_mass = 0.0;      // estimated l1 mass of p outside the box
};

/// Projection built from xi_lambda = e^{-pi theta t^2 - 2 i lambda t}.
/// With strict = true a tail above tol.truncation_eps throws TruncationError.
Instanton instanton(double theta, Complex lambda, const Tolerance& tol, int box, bool strict = true);

/// max over grid nodes of |xi'(t) + (2 pi theta t + 2 i lambda) xi(t)|;
/// closed-form derivative for Gaussians, central differences otherwise.
double gaussian_ode_residual(const SchwartzVector& xi, Complex lambda, const GridSpec& grid = {});

void to_json(nlohmann::json& j, const SchwartzVector& v);
SchwartzVector schwartz_vector_from_json(const nlohmann::json& j);

}  // namespace ncsigma
