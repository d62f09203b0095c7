#include "ncsigma/torus_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twist.hpp"

namespace ncsigma {

void Tolerance::validate() const {
  if (!(algebraic_eps > 0.0) || !(truncation_eps > 0.0) || !(quadrature_eps > 0.0)) {
    throw PreconditionError("tolerances must be strictly positive");
  }
}

void require_same_theta(double a, double b, const char* what) {
  if (std::bit_cast<std::uint64_t>(a) != std::bit_cast<std::uint64_t>(b)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": theta mismatch (" << a << " vs " << b << ")";
    throw CompositionError(os.str());
  }
}

TorusElement TorusElement::monomial(double theta, int m, int n, Complex c) {
  TorusElement e(theta);
  if (c == Complex(0.0, 0.0)) return e;
  e.m_lo_ = m;
  e.n_lo_ = n;
  e.rows_ = 1;
  e.cols_ = 1;
  e.data_.assign(1, c);
  return e;
}

TorusElement TorusElement::from_terms(double theta, std::span<const Term> terms) {
  TorusElement e(theta);
  if (terms.empty()) return e;
  int m_lo = terms.front().index.m, m_hi = m_lo;
  int n_lo = terms.front().index.n, n_hi = n_lo;
  for (const auto& t : terms) {
    m_lo = std::min(m_lo, t.index.m);
    m_hi = std::max(m_hi, t.index.m);
    n_lo = std::min(n_lo, t.index.n);
    n_hi = std::max(n_hi, t.index.n);
  }
  e.m_lo_ = m_lo;
  e.n_lo_ = n_lo;
  e.rows_ = m_hi - m_lo + 1;
  e.cols_ = n_hi - n_lo + 1;
  e.data_.assign(static_cast<std::size_t>(e.rows_) * e.cols_, Complex(0.0, 0.0));
  for (const auto& t : terms) {
    e.data_[static_cast<std::size_t>(t.index.m - m_lo) * e.cols_ + (t.index.n - n_lo)] += t.value;
  }
  e.trim();
  return e;
}

TorusElement TorusElement::from_dense(double theta, int m_lo, int n_lo, int rows, int cols,
                                      std::vector<Complex> data) {
  TorusElement e(theta);
  if (rows <= 0 || cols <= 0) return e;
  if (data.size() != static_cast<std::size_t>(rows) * cols) {
    throw PreconditionError("from_dense: data size does not match rectangle");
  }
  e.m_lo_ = m_lo;
  e.n_lo_ = n_lo;
  e.rows_ = rows;
  e.cols_ = cols;
  e.data_ = std::move(data);
  e.trim();
  return e;
}

Complex TorusElement::coefficient(int m, int n) const {
  const int i = m - m_lo_;
  const int j = n - n_lo_;
  if (i < 0 || j < 0 || i >= rows_ || j >= cols_) return {0.0, 0.0};
  return data_[static_cast<std::size_t>(i) * cols_ + j];
}

std::vector<Term> TorusElement::terms() const {
  std::vector<Term> out;
  for_each_term([&](LatticePoint k, Complex c) { out.push_back({k, c}); });
  return out;
}

std::size_t TorusElement::support_size() const {
  std::size_t count = 0;
  for (const auto& c : data_) count += (c != Complex(0.0, 0.0));
  return count;
}

int TorusElement::max_index() const {
  int r = 0;
  for_each_term([&](LatticePoint k, Complex) { r = std::max({r, std::abs(k.m), std::abs(k.n)}); });
  return r;
}

void TorusElement::trim() {
  auto zero = [](const Complex& c) { return c == Complex(0.0, 0.0); };
  auto row_zero = [&](int i) {
    for (int j = 0; j < cols_; ++j)
      if (!zero(data_[static_cast<std::size_t>(i) * cols_ + j])) return false;
    return true;
  };
  auto col_zero = [&](int j) {
    for (int i = 0; i < rows_; ++i)
      if (!zero(data_[static_cast<std::size_t>(i) * cols_ + j])) return false;
    return true;
  };
  int top = 0, bottom = rows_ - 1;
  while (top <= bottom && row_zero(top)) ++top;
  if (top > bottom) {
    m_lo_ = n_lo_ = rows_ = cols_ = 0;
    data_.clear();
    return;
  }
  while (row_zero(bottom)) --bottom;
  int left = 0, right = cols_ - 1;
  while (col_zero(left)) ++left;
  while (col_zero(right)) --right;
  if (top == 0 && left == 0 && bottom == rows_ - 1 && right == cols_ - 1) return;
  const int rows = bottom - top + 1;
  const int cols = right - left + 1;
  std::vector<Complex> d(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      d[static_cast<std::size_t>(i) * cols + j] =
          data_[static_cast<std::size_t>(i + top) * cols_ + (j + left)];
  m_lo_ += top;
  n_lo_ += left;
  rows_ = rows;
  cols_ = cols;
  data_ = std::move(d);
}

void TorusElement::reshape_to_cover(int m_lo, int n_lo, int m_hi, int n_hi) {
  if (rows_ == 0) {
    m_lo_ = m_lo;
    n_lo_ = n_lo;
    rows_ = m_hi - m_lo + 1;
    cols_ = n_hi - n_lo + 1;
    data_.assign(static_cast<std::size_t>(rows_) * cols_, Complex(0.0, 0.0));
    return;
  }
  const int new_m_lo = std::min(m_lo, m_lo_);
  const int new_n_lo = std::min(n_lo, n_lo_);
  const int new_m_hi = std::max(m_hi, m_lo_ + rows_ - 1);
  const int new_n_hi = std::max(n_hi, n_lo_ + cols_ - 1);
  if (new_m_lo == m_lo_ && new_n_lo == n_lo_ && new_m_hi == m_lo_ + rows_ - 1 &&
      new_n_hi == n_lo_ + cols_ - 1)
    return;
  const int rows = new_m_hi - new_m_lo + 1;
  const int cols = new_n_hi - new_n_lo + 1;
  std::vector<Complex> d(static_cast<std::size_t>(rows) * cols, Complex(0.0, 0.0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      d[static_cast<std::size_t>(i + m_lo_ - new_m_lo) * cols + (j + n_lo_ - new_n_lo)] =
          data_[static_cast<std::size_t>(i) * cols_ + j];
  m_lo_ = new_m_lo;
  n_lo_ = new_n_lo;
  rows_ = rows;
  cols_ = cols;
  data_ = std::move(d);
}

TorusElement& TorusElement::operator+=(const TorusElement& other) {
  require_same_theta(theta_, other.theta_, "add");
  if (other.rows_ == 0) return *this;
  reshape_to_cover(other.m_lo_, other.n_lo_, other.m_lo_ + other.rows_ - 1,
                   other.n_lo_ + other.cols_ - 1);
  for (int i = 0; i < other.rows_; ++i)
    for (int j = 0; j < other.cols_; ++j)
      data_[static_cast<std::size_t>(i + other.m_lo_ - m_lo_) * cols_ + (j + other.n_lo_ - n_lo_)] +=
          other.data_[static_cast<std::size_t>(i) * other.cols_ + j];
  trim();
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& other) {
  require_same_theta(theta_, other.theta_, "subtract");
  if (other.rows_ == 0) return *this;
  reshape_to_cover(other.m_lo_, other.n_lo_, other.m_lo_ + other.rows_ - 1,
                   other.n_lo_ + other.cols_ - 1);
  for (int i = 0; i < other.rows_; ++i)
    for (int j = 0; j < other.cols_; ++j)
      data_[static_cast<std::size_t>(i + other.m_lo_ - m_lo_) * cols_ + (j + other.n_lo_ - n_lo_)] -=
          other.data_[static_cast<std::size_t>(i) * other.cols_ + j];
  trim();
  return *this;
}

TorusElement& TorusElement::operator*=(Complex c) {
  for (auto& x : data_) x *= c;
  trim();
  return *this;
}

bool operator==(const TorusElement& a, const TorusElement& b) {
  if (std::bit_cast<std::uint64_t>(a.theta_) != std::bit_cast<std::uint64_t>(b.theta_)) return false;
  const auto ta = a.terms();
  const auto tb = b.terms();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].index != tb[i].index) return false;
    if (std::memcmp(&ta[i].value, &tb[i].value, sizeof(Complex)) != 0) return false;
  }
  return true;
}

// (U^k V^l)(U^m V^n) = e^{-2 pi i theta l m} U^{k+m} V^{l+n}
TorusElement mul(const TorusElement& a, const TorusElement& b) {
  require_same_theta(a.theta(), b.theta(), "mul");
  const double theta = a.theta();
  if (a.rows() == 0 || b.rows() == 0) return TorusElement(theta);

  const int out_rows = a.rows() + b.rows() - 1;
  const int out_cols = a.cols() + b.cols() - 1;
  std::vector<Complex> out(static_cast<std::size_t>(out_rows) * out_cols, Complex(0.0, 0.0));

  // twist[j][p] = e^{-2 pi i theta (n_lo_a + j)(m_lo_b + p)}
  std::vector<Complex> twist(static_cast<std::size_t>(a.cols()) * b.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int p = 0; p < b.rows(); ++p)
      twist[static_cast<std::size_t>(j) * b.rows() + p] =
          detail::twist_phase(theta, -static_cast<long long>(a.n_lo() + j) * (b.m_lo() + p));

  const auto& ad = a.dense();
  const auto& bd = b.dense();
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const Complex x = ad[static_cast<std::size_t>(i) * a.cols() + j];
      if (x == Complex(0.0, 0.0)) continue;
      for (int p = 0; p < b.rows(); ++p) {
        const Complex f = x * twist[static_cast<std::size_t>(j) * b.rows() + p];
        const Complex* brow = &bd[static_cast<std::size_t>(p) * b.cols()];
        Complex* orow = &out[static_cast<std::size_t>(i + p) * out_cols + j];
        for (int q = 0; q < b.cols(); ++q) orow[q] += f * brow[q];
      }
    }
  }
  return TorusElement::from_dense(theta, a.m_lo() + b.m_lo(), a.n_lo() + b.n_lo(), out_rows,
                                  out_cols, std::move(out));
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) { return mul(a, b); }

// (a*)_{m,n} = conj(a_{-m,-n}) e^{-2 pi i theta m n}
TorusElement adjoint(const TorusElement& a) {
  const double theta = a.theta();
  if (a.rows() == 0) return TorusElement(theta);
  const int rows = a.rows(), cols = a.cols();
  std::vector<Complex> out(static_cast<std::size_t>(rows) * cols);
  const int m_lo = -(a.m_lo() + rows - 1);
  const int n_lo = -(a.n_lo() + cols - 1);
  const auto& d = a.dense();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int m = m_lo + i, n = n_lo + j;
      const Complex c = d[static_cast<std::size_t>(rows - 1 - i) * cols + (cols - 1 - j)];
      out[static_cast<std::size_t>(i) * cols + j] =
          c == Complex(0.0, 0.0) ? c
                                 : std::conj(c) * detail::twist_phase(theta, -static_cast<long long>(m) * n);
    }
  }
  return TorusElement::from_dense(theta, m_lo, n_lo, rows, cols, std::move(out));
}

Complex trace(const TorusElement& a) { return a.coefficient(0, 0); }

Complex trace_of_product(const TorusElement& a, const TorusElement& b) {
  require_same_theta(a.theta(), b.theta(), "trace_of_product");
  Complex s(0.0, 0.0);
  a.for_each_term([&](LatticePoint k, Complex x) {
    const Complex y = b.coefficient(-k.m, -k.n);
    if (y != Complex(0.0, 0.0))
      s += x * y * detail::twist_phase(a.theta(), static_cast<long long>(k.m) * k.n);
  });
  return s;
}

TorusElement delta(int j, const TorusElement& a) {
  if (j != 1 && j != 2) throw PreconditionError("delta: index must be 1 or 2");
  std::vector<Complex> d = a.dense();
  for (int i = 0; i < a.rows(); ++i)
    for (int c = 0; c < a.cols(); ++c) {
      const int k = (j == 1) ? a.m_lo() + i : a.n_lo() + c;
      d[static_cast<std::size_t>(i) * a.cols() + c] *= Complex(0.0, kTwoPi * k);
    }
  return TorusElement::from_dense(a.theta(), a.m_lo(), a.n_lo(), a.rows(), a.cols(), std::move(d));
}

TorusElement laplacian(const TorusElement& a) {
  std::vector<Complex> d = a.dense();
  for (int i = 0; i < a.rows(); ++i)
    for (int c = 0; c < a.cols(); ++c) {
      const double m = a.m_lo() + i, n = a.n_lo() + c;
      d[static_cast<std::size_t>(i) * a.cols() + c] *= -4.0 * kPi * kPi * (m * m + n * n);
    }
  return TorusElement::from_dense(a.theta(), a.m_lo(), a.n_lo(), a.rows(), a.cols(), std::move(d));
}

TorusElement commutator(const TorusElement& a, const TorusElement& b) { return mul(a, b) - mul(b, a); }

Norms norms(const TorusElement& a) {
  Norms r;
  double sq = 0.0;
  for (const auto& c : a.dense()) {
    r.l1 += std::abs(c);
    sq += std::norm(c);
  }
  r.gns = std::sqrt(sq);
  return r;
}

TorusElement random_element(double theta, int box, std::uint64_t seed) {
  if (box < 0) throw PreconditionError("random_element: box must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int side = 2 * box + 1;
  std::vector<Complex> d(static_cast<std::size_t>(side) * side);
  for (auto& c : d) {
    const double r = std::sqrt(u(rng));
    const double arg = kTwoPi * u(rng);
    c = std::polar(r, arg);
  }
  return TorusElement::from_dense(theta, -box, -box, side, side, std::move(d));
}

TorusElement random_selfadjoint(double theta, int box, std::uint64_t seed) {
  const TorusElement a = random_element(theta, box, seed);
  return (a + adjoint(a)) * 0.5;
}

bool is_scalar(const TorusElement& a, const Tolerance& tol) {
  double off = 0.0;
  a.for_each_term([&](LatticePoint k, Complex c) {
    if (k.m != 0 || k.n != 0) off += std::abs(c);
  });
  return off <= tol.algebraic_eps;
}

Truncated truncate_to_box(const TorusElement& a, int box) {
  std::vector<Term> kept;
  double tail = 0.0;
  a.for_each_term([&](LatticePoint k, Complex c) {
    if (std::abs(k.m) <= box && std::abs(k.n) <= box)
      kept.push_back({k, c});
    else
      tail += std::abs(c);
  });
  return {TorusElement::from_terms(a.theta(), kept), tail};
}

Truncated prune(const TorusElement& a, double rel) {
  double mx = 0.0;
  for (const auto& c : a.dense()) mx = std::max(mx, std::abs(c));
  const double cut = rel * mx;
  std::vector<Complex> d = a.dense();
  double tail = 0.0;
  for (auto& c : d) {
    const double r = std::abs(c);
    if (r != 0.0 && r < cut) {
      tail += r;
      c = Complex(0.0, 0.0);
    }
  }
  return {TorusElement::from_dense(a.theta(), a.m_lo(), a.n_lo(), a.rows(), a.cols(), std::move(d)),
          tail};
}

namespace {

TorusElement clip(const TorusElement& a, const ExpOptions& opts) {
  TorusElement r = prune(a, opts.drop_relative).element;
  if (opts.max_box > 0) r = truncate_to_box(r, opts.max_box).element;
  return r;
}

}  // namespace

TorusElement exp_i(const TorusElement& h, double t, const ExpOptions& opts) {
  const double theta = h.theta();
  const TorusElement x = h * Complex(0.0, t);
  const double nx = l1_norm(x);
  if (nx == 0.0) return TorusElement::identity(theta);
  int squarings = 0;
  if (nx > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nx / 0.5)));
  const TorusElement y = x * std::ldexp(1.0, -squarings);

  TorusElement sum = TorusElement::identity(theta);
  TorusElement term = TorusElement::identity(theta);
  for (int k = 1; k <= 60; ++k) {
    term = clip(mul(term, y) * (1.0 / k), opts);
    sum += term;
    if (l1_norm(term) < 1e-18) break;
  }
  sum = clip(sum, opts);
  for (int s = 0; s < squarings; ++s) sum = clip(mul(sum, sum), opts);
  return sum;
}

double unitarity_defect(const TorusElement& x) {
  const TorusElement one = TorusElement::identity(x.theta());
  const TorusElement xs = adjoint(x);
  return std::max(l1_norm(mul(xs, x) - one), l1_norm(mul(x, xs) - one));
}

void to_json(nlohmann::json& j, const TorusElement& a) {
  nlohmann::json coeffs = nlohmann::json::array();
  a.for_each_term([&](LatticePoint k, Complex c) {
    coeffs.push_back({k.m, k.n, c.real(), c.imag()});
  });
  j = nlohmann::json{{"theta", a.theta()}, {"coeffs", std::move(coeffs)}};
}

void from_json(const nlohmann::json& j, TorusElement& a) {
  const double theta = j.at("theta").get<double>();
  std::vector<Term> terms;
  for (const auto& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 4) throw PreconditionError("coeffs rows must be [m, n, re, im]");
    terms.push_back({{row[0].get<int>(), row[1].get<int>()},
                     Complex(row[2].get<double>(), row[3].get<double>())});
  }
  a = TorusElement::from_terms(theta, terms);
}

}  // namespace ncsigma
