#pragma once

// Finite-dimensional check of the torus relations at theta = 1/q:
// U -> clock, V -> shift on C^q, tau -> normalized matrix trace.

#include <vector>

#include "ncsigma/torus_algebra.hpp"

namespace ncsigma::oracle {

class DenseMatrix {
 public:
  explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0)) {}
  int size() const { return n_; }
  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  Complex operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  Complex normalized_trace() const;
  double max_abs_diff(const DenseMatrix& other) const;
  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y);

 private:
  int n_;
  std::vector<Complex> a_;
};

/// Image of `a` under U^m V^n -> C^m S^n. Requires theta == 1/q to 1e-15.
DenseMatrix clock_shift_image(const TorusElement& a, int q);

/// Normalized trace of the image: sum of a_{m,n} over q | m and q | n.
Complex aliased_trace(const TorusElement& a, int q);

}  // namespace ncsigma::oracle
