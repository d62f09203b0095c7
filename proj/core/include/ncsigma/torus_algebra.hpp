#pragma once

// Smooth noncommutative torus A_theta, elements stored as finitely supported
// Fourier series  a = sum a_{m,n} U^m V^n  with  UV = e^{2 pi i theta} VU.

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ncsigma/errors.hpp"

namespace ncsigma {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Integer pair (m, n) labelling the monomial U^m V^n; also the group Z^2
/// acting by conjugation.
struct LatticePoint {
  int m = 0;
  int n = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

struct Term {
  LatticePoint index;
  Complex value;
};

struct Tolerance {
  double algebraic_eps = 1e-10;   // round-off
  double truncation_eps = 1e-10;  // series tails
  double quadrature_eps = 1e-8;   // integrals

  /// Throws PreconditionError unless all three are strictly positive.
  void validate() const;
};

/// Finitely supported element of A_theta.
///
/// Storage is a dense rectangle covering the support; entries outside it are
/// zero. The support is the set of indices whose coefficient is nonzero, and
/// `terms()` returns them in lexicographic (m, n) order.
class TorusElement {
 public:
  TorusElement() = default;
  explicit TorusElement(double theta) : theta_(theta) {}

  static TorusElement monomial(double theta, int m, int n, Complex c = 1.0);
  static TorusElement identity(double theta) { return monomial(theta, 0, 0, 1.0); }
  static TorusElement scalar(double theta, Complex c) { return monomial(theta, 0, 0, c); }
  /// Duplicate indices are summed.
  static TorusElement from_terms(double theta, std::span<const Term> terms);

  double theta() const { return theta_; }
  Complex coefficient(int m, int n) const;
  Complex coefficient(LatticePoint k) const { return coefficient(k.m, k.n); }

  std::vector<Term> terms() const;
  std::size_t support_size() const;
  bool is_zero() const { return support_size() == 0; }
  /// max(|m|, |n|) over the support; 0 for the zero element.
  int max_index() const;

  template <class F>
  void for_each_term(F&& f) const {
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) {
        const Complex& c = data_[static_cast<std::size_t>(i) * cols_ + j];
        if (c != Complex(0.0, 0.0)) f(LatticePoint{m_lo_ + i, n_lo_ + j}, c);
      }
    }
  }

  TorusElement& operator+=(const TorusElement& other);
  TorusElement& operator-=(const TorusElement& other);
  TorusElement& operator*=(Complex c);

  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator-(TorusElement a) { return a *= -1.0; }
  friend TorusElement operator*(TorusElement a, Complex c) { return a *= c; }
  friend TorusElement operator*(Complex c, TorusElement a) { return a *= c; }
  friend TorusElement operator*(const TorusElement& a, const TorusElement& b);

  /// Bitwise equality of theta and of every coefficient.
  friend bool operator==(const TorusElement& a, const TorusElement& b);

  // Raw rectangle access for the algebra kernels.
  int m_lo() const { return m_lo_; }
  int n_lo() const { return n_lo_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Complex>& dense() const { return data_; }

  /// Builds an element from a rectangle of coefficients; trailing zero rows
  /// and columns are trimmed.
  static TorusElement from_dense(double theta, int m_lo, int n_lo, int rows, int cols,
                                 std::vector<Complex> data);

 private:
  void trim();
  void reshape_to_cover(int m_lo, int n_lo, int m_hi, int n_hi);

  double theta_ = 0.0;
  int m_lo_ = 0;
  int n_lo_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

/// Throws CompositionError unless the two theta values are bit-identical.
void require_same_theta(double a, double b, const char* what);

TorusElement mul(const TorusElement& a, const TorusElement& b);
TorusElement adjoint(const TorusElement& a);
Complex trace(const TorusElement& a);
/// tau(a b) without forming the product.
Complex trace_of_product(const TorusElement& a, const TorusElement& b);
/// j in {1, 2}; delta_1 scales a_{m,n} by 2 pi i m, delta_2 by 2 pi i n.
TorusElement delta(int j, const TorusElement& a);
TorusElement laplacian(const TorusElement& a);
TorusElement commutator(const TorusElement& a, const TorusElement& b);

struct Norms {
  double l1 = 0.0;
  double gns = 0.0;
};
Norms norms(const TorusElement& a);
inline double l1_norm(const TorusElement& a) { return norms(a).l1; }
inline double gns_norm(const TorusElement& a) { return norms(a).gns; }

TorusElement random_selfadjoint(double theta, int box, std::uint64_t seed);
/// Random element (not self-adjoint) with coefficients uniform in the unit disc.
TorusElement random_element(double theta, int box, std::uint64_t seed);

bool is_scalar(const TorusElement& a, const Tolerance& tol);

/// Result of a lossy step. `tail_mass` is the l1 mass that was removed.
struct Truncated {
  TorusElement element;
  double tail_mass = 0.0;
};

/// Keeps the coefficients with max(|m|, |n|) <= box.
Truncated truncate_to_box(const TorusElement& a, int box);
/// Drops coefficients with modulus below rel * (max modulus).
Truncated prune(const TorusElement& a, double rel = kDefaultDropRelative);

struct ExpOptions {
  double drop_relative = 1e-18;
  int max_box = 0;  // 0 = no box truncation
};

/// e^{i t h} by scaling and squaring of the Taylor series. Unitary when h is
/// self-adjoint, up to the drop threshold.
TorusElement exp_i(const TorusElement& h, double t, const ExpOptions& opts = {});

/// ||x* x - 1||_l1 and ||x x* - 1||_l1, whichever is larger.
double unitarity_defect(const TorusElement& x);

void to_json(nlohmann::json& j, const TorusElement& a);
void from_json(const nlohmann::json& j, TorusElement& a);

}  // namespace ncsigma
