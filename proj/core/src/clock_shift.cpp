#include "ncsigma/clock_shift.hpp"

#include <algorithm>
#include <cmath>

#include "twist.hpp"

namespace ncsigma::oracle {

namespace {
int mod(long long a, int q) {
  const long long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}
}  // namespace

Complex DenseMatrix::normalized_trace() const {
  Complex s(0.0, 0.0);
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s / static_cast<double>(n_);
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  double r = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) r = std::max(r, std::abs(a_[i] - other.a_[i]));
  return r;
}

DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
  const int n = x.n_;
  DenseMatrix z(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex xik = x(i, k);
      if (xik == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

// (C^m S^n) e_k = omega^{m(k+n)} e_{k+n}
DenseMatrix clock_shift_image(const TorusElement& a, int q) {
  if (q < 2 || std::abs(a.theta() - 1.0 / q) > 1e-15) {
    throw PreconditionError("clock_shift_image: theta must equal 1/q");
  }
  const double theta = 1.0 / q;
  DenseMatrix out(q);
  a.for_each_term([&](LatticePoint idx, Complex c) {
    for (int k = 0; k < q; ++k) {
      const int row = mod(static_cast<long long>(k) + idx.n, q);
      out(row, k) += c * detail::twist_phase(theta, mod(static_cast<long long>(idx.m) * (k + idx.n), q));
    }
  });
  return out;
}

Complex aliased_trace(const TorusElement& a, int q) {
  Complex s(0.0, 0.0);
  a.for_each_term([&](LatticePoint idx, Complex c) {
    if (idx.m % q == 0 && idx.n % q == 0) s += c;
  });
  return s;
}

}  // namespace ncsigma::oracle
