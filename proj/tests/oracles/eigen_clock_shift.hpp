#pragma once

// Clock-and-shift representation at theta = 1/q built from Eigen matrix
// powers: C = diag(omega^k), S e_k = e_{k+1}, so CS = omega SC.

#include <cmath>

#include <Eigen/Dense>

#include "ncsigma/torus_algebra.hpp"

namespace eigen_oracle {

using Matrix = Eigen::MatrixXcd;

inline Matrix clock(int q) {
  Matrix c = Matrix::Zero(q, q);
  for (int k = 0; k < q; ++k) c(k, k) = std::polar(1.0, 2.0 * M_PI * k / q);
  return c;
}

inline Matrix shift(int q) {
  Matrix s = Matrix::Zero(q, q);
  for (int k = 0; k < q; ++k) s((k + 1) % q, k) = 1.0;
  return s;
}

// Unitary, so negative powers are adjoint powers.
inline Matrix power(const Matrix& g, int e) {
  const Matrix base = e >= 0 ? Matrix(g) : Matrix(g.adjoint());
  Matrix out = Matrix::Identity(g.rows(), g.cols());
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

inline Matrix image(const ncsigma::TorusElement& a, int q) {
  const Matrix c = clock(q);
  const Matrix s = shift(q);
  Matrix out = Matrix::Zero(q, q);
  a.for_each_term([&](ncsigma::LatticePoint k, ncsigma::Complex v) {
    out += v * power(c, k.m) * power(s, k.n);
  });
  return out;
}

inline ncsigma::Complex normalized_trace(const Matrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

}  // namespace eigen_oracle
