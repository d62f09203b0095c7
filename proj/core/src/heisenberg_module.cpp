#include "ncsigma/heisenberg_module.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twist.hpp"

namespace ncsigma {

namespace {

constexpr int kStencil = 10;

void require_positive_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw PreconditionError("Gaussian vectors need theta > 0");
  }
}

void require_dual(const SchwartzVector& xi, const TorusElement& b, const char* what) {
  require_same_theta(b.theta(), dual_theta(xi.theta()), what);
}

std::vector<double> trapezoid_weights(const GridSpec& g) {
  std::vector<double> w(static_cast<std::size_t>(g.points), g.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<Complex> values_on(const SchwartzVector& v, const GridSpec& g) {
  std::vector<Complex> out(static_cast<std::size_t>(g.points));
  for (int k = 0; k < g.points; ++k) out[k] = v(g.node(k));
  return out;
}

// int g1(t) conj(g2(t)) dt for two Gaussian profiles of the same theta.
Complex overlap(double theta, const GaussianProfile& a, const GaussianProfile& b) {
  if (a.amplitude == Complex(0.0) || b.amplitude == Complex(0.0)) return 0.0;
  const Complex i(0.0, 1.0);
  const double alpha = 2.0 * kPi * theta;
  const Complex beta = -2.0 * i * a.lambda + 2.0 * i * std::conj(b.lambda);
  const Complex expo = a.log_scale + b.log_scale + beta * beta / (4.0 * alpha);
  return a.amplitude * std::conj(b.amplitude) * std::sqrt(kPi / alpha) * std::exp(expo);
}

// (U^m V^n g)(t) = e^{2 pi i theta n (t + m)} g(t + m)
SchwartzVector left_monomial(const SchwartzVector& v, int m, int n) {
  const Complex phase = detail::twist_phase(v.theta(), static_cast<long long>(m) * n);
  return v.translated(m).modulated(v.theta() * n).scaled(phase);
}

// (g U1^m V1^n)(t) = e^{2 pi i n t} g(t + m / theta)
SchwartzVector right_monomial(const SchwartzVector& v, int m, int n) {
  return v.translated(m / v.theta()).modulated(n);
}

const GridSpec& working_grid(const SchwartzVector& xi, const SchwartzVector& eta,
                             const GridSpec& fallback) {
  if (!xi.is_gaussian()) return xi.as_sampled().grid;
  if (!eta.is_gaussian()) return eta.as_sampled().grid;
  return fallback;
}

// Fills the coefficients for max(|m|,|n|) <= reach via coef(m, n), splitting
// them into the box and the tail ring.
template <class F>
InnerProduct assemble(double out_theta, const InnerProductOptions& opts, F&& coef) {
  if (opts.box < 0 || opts.tail_shell < 0) throw PreconditionError("negative truncation box");
  opts.tol.validate();
  const int reach = opts.box + opts.tail_shell;
  const int side = 2 * opts.box + 1;
  std::vector<Complex> data(static_cast<std::size_t>(side) * side);
  double tail = 0.0;
  for (int m = -reach; m <= reach; ++m) {
    for (int n = -reach; n <= reach; ++n) {
      const Complex c = coef(m, n);
      if (std::abs(m) <= opts.box && std::abs(n) <= opts.box) {
        data[static_cast<std::size_t>(m + opts.box) * side + (n + opts.box)] = c;
      } else {
        tail += std::abs(c);
      }
    }
  }
  InnerProduct out;
  auto pr = prune(TorusElement::from_dense(out_theta, -opts.box, -opts.box, side, side,
                                           std::move(data)),
                  opts.drop_relative);
  out.value = std::move(pr.element);
  out.pruned_mass = pr.tail_mass;
  out.tail_mass = tail;
  if (opts.strict && tail > opts.tol.truncation_eps) {
    std::ostringstream os;
    os << "inner product tail mass " << tail << " exceeds truncation_eps at box " << opts.box;
    throw TruncationError(os.str(), tail);
  }
  return out;
}

// Quadrature path shared by both inner products:
//   coef(m, n) = scale * phase(m, n) * sum_k w_k P_m(k) e^{-2 pi i freq n t_k}
// where P_m is supplied per m.
template <class P, class Phase>
InnerProduct quadrature_coeffs(double out_theta, const GridSpec& g, double freq, double scale,
                               const InnerProductOptions& opts, P&& products, Phase&& phase) {
  const int reach = opts.box + opts.tail_shell;
  const auto w = trapezoid_weights(g);
  const std::size_t npts = w.size();
  std::vector<std::vector<Complex>> waves(static_cast<std::size_t>(2 * reach + 1));
  for (int n = -reach; n <= reach; ++n) {
    auto& row = waves[n + reach];
    row.resize(npts);
    for (std::size_t k = 0; k < npts; ++k) {
      const double x = freq * n * g.node(static_cast<int>(k));
      row[k] = w[k] * std::polar(1.0, -kTwoPi * (x - std::nearbyint(x)));
    }
  }
  int cached_m = reach + 1;
  std::vector<Complex> pm;
  return assemble(out_theta, opts, [&](int m, int n) {
    if (m != cached_m) {
      pm = products(m);
      cached_m = m;
    }
    const auto& row = waves[n + reach];
    Complex acc = 0.0;
    for (std::size_t k = 0; k < npts; ++k) acc += pm[k] * row[k];
    return scale * phase(m, n) * acc;
  });
}

}  // namespace

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw PreconditionError("grid half-width must be positive");
  }
  if (points < 3) throw PreconditionError("grid needs at least 3 points");
}

SchwartzVector SchwartzVector::gaussian(double theta, Complex amplitude, Complex lambda) {
  return gaussian(theta, GaussianProfile{amplitude, lambda, 0.0});
}

SchwartzVector SchwartzVector::gaussian(double theta, const GaussianProfile& profile) {
  require_positive_theta(theta);
  return SchwartzVector(theta, profile);
}

SchwartzVector SchwartzVector::sampled(double theta, GridSpec grid, std::vector<Complex> values) {
  if (theta == 0.0 || !std::isfinite(theta)) throw PreconditionError("theta must be nonzero");
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.points)) {
    throw PreconditionError("sample count does not match grid");
  }
  return SchwartzVector(theta, SampledProfile{grid, std::move(values)});
}

SchwartzVector SchwartzVector::sample(double theta, const GridSpec& grid,
                                      const std::function<Complex(double)>& f) {
  grid.validate();
  std::vector<Complex> v(static_cast<std::size_t>(grid.points));
  for (int k = 0; k < grid.points; ++k) v[k] = f(grid.node(k));
  return sampled(theta, grid, std::move(v));
}

bool SchwartzVector::is_zero() const {
  if (is_gaussian()) return as_gaussian().amplitude == Complex(0.0);
  const auto& v = as_sampled().values;
  return std::all_of(v.begin(), v.end(), [](Complex c) { return c == Complex(0.0); });
}

Complex SchwartzVector::operator()(double t) const {
  if (is_gaussian()) {
    const auto& g = as_gaussian();
    if (g.amplitude == Complex(0.0)) return 0.0;
    const Complex i(0.0, 1.0);
    return g.amplitude * std::exp(g.log_scale - kPi * theta_ * t * t - 2.0 * i * g.lambda * t);
  }
  const auto& s = as_sampled();
  const int npts = s.grid.points;
  const double x = (t + s.grid.half_width) / s.grid.spacing();
  constexpr double snap = 1e-9;
  if (x < -snap || x > (npts - 1) + snap) return 0.0;
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= snap) return s.values[static_cast<std::size_t>(r)];
  const int width = std::min(kStencil, npts);
  int start = static_cast<int>(std::floor(x)) - width / 2 + 1;
  start = std::clamp(start, 0, npts - width);
  Complex acc = 0.0;
  for (int j = 0; j < width; ++j) {
    double wj = 1.0;
    for (int i = 0; i < width; ++i) {
      if (i != j) wj *= (x - (start + i)) / static_cast<double>(j - i);
    }
    acc += wj * s.values[static_cast<std::size_t>(start + j)];
  }
  return acc;
}

SchwartzVector SchwartzVector::to_sampled(const GridSpec& grid) const {
  grid.validate();
  return sampled(theta_, grid, values_on(*this, grid));
}

SchwartzVector SchwartzVector::translated(double s) const {
  if (is_gaussian()) {
    GaussianProfile g = as_gaussian();
    const Complex i(0.0, 1.0);
    const Complex z = -kPi * theta_ * s * s - 2.0 * i * g.lambda * s;
    g.amplitude *= std::polar(1.0, z.imag());
    g.log_scale += z.real();
    g.lambda -= i * kPi * theta_ * s;
    return SchwartzVector(theta_, g);
  }
  const auto& src = as_sampled();
  std::vector<Complex> v(src.values.size());
  for (int k = 0; k < src.grid.points; ++k) v[k] = (*this)(src.grid.node(k) + s);
  return SchwartzVector(theta_, SampledProfile{src.grid, std::move(v)});
}

SchwartzVector SchwartzVector::modulated(double f) const {
  if (f == 0.0) return *this;
  if (is_gaussian()) {
    GaussianProfile g = as_gaussian();
    g.lambda -= kPi * f;
    return SchwartzVector(theta_, g);
  }
  SampledProfile s = as_sampled();
  for (int k = 0; k < s.grid.points; ++k) {
    const double x = f * s.grid.node(k);
    s.values[k] *= std::polar(1.0, kTwoPi * (x - std::nearbyint(x)));
  }
  return SchwartzVector(theta_, std::move(s));
}

SchwartzVector SchwartzVector::scaled(Complex c) const {
  if (is_gaussian()) {
    GaussianProfile g = as_gaussian();
    g.amplitude *= c;
    return SchwartzVector(theta_, g);
  }
  SampledProfile s = as_sampled();
  for (auto& v : s.values) v *= c;
  return SchwartzVector(theta_, std::move(s));
}

double grid_distance(const SchwartzVector& x, const SchwartzVector& y, const GridSpec& grid) {
  grid.validate();
  double d = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    const double t = grid.node(k);
    d = std::max(d, std::abs(x(t) - y(t)));
  }
  return d;
}

double grid_max(const SchwartzVector& x, const GridSpec& grid) {
  grid.validate();
  double d = 0.0;
  for (int k = 0; k < grid.points; ++k) d = std::max(d, std::abs(x(grid.node(k))));
  return d;
}

namespace {

template <class Monomial>
SchwartzVector act_generic(const TorusElement& a, const SchwartzVector& xi, const GridSpec& grid,
                           Monomial&& monomial) {
  const auto support = a.support_size();
  if (support == 0) {
    if (xi.is_gaussian()) return SchwartzVector::gaussian(xi.theta(), 0.0, 0.0);
    return xi.scaled(0.0);
  }
  if (support == 1) {
    const auto t = a.terms().front();
    return monomial(xi, t.index.m, t.index.n).scaled(t.value);
  }
  const GridSpec& g = xi.is_gaussian() ? grid : xi.as_sampled().grid;
  g.validate();
  std::vector<Complex> acc(static_cast<std::size_t>(g.points));
  a.for_each_term([&](LatticePoint k, Complex c) {
    const auto img = monomial(xi, k.m, k.n);
    for (int j = 0; j < g.points; ++j) acc[j] += c * img(g.node(j));
  });
  return SchwartzVector::sampled(xi.theta(), g, std::move(acc));
}

}  // namespace

SchwartzVector act_left(const TorusElement& a, const SchwartzVector& xi, const GridSpec& grid) {
  require_same_theta(a.theta(), xi.theta(), "act_left");
  return act_generic(a, xi, grid, left_monomial);
}

SchwartzVector act_right(const SchwartzVector& xi, const DualTorusElement& b,
                         const GridSpec& grid) {
  require_dual(xi, b, "act_right");
  return act_generic(b, xi, grid, right_monomial);
}

double inner_a_normalization(double) { return 1.0; }
double inner_b_normalization(double theta) { return 1.0 / std::abs(theta); }

InnerProduct inner_A(const SchwartzVector& xi, const SchwartzVector& eta,
                     const InnerProductOptions& opts) {
  require_same_theta(xi.theta(), eta.theta(), "inner_A");
  const double theta = xi.theta();
  const double c_a = inner_a_normalization(theta);
  if (xi.is_gaussian() && eta.is_gaussian()) {
    const auto& g = xi.as_gaussian();
    return assemble(theta, opts, [&](int m, int n) {
      return c_a * overlap(theta, g, left_monomial(eta, m, n).as_gaussian());
    });
  }
  const GridSpec& grid = working_grid(xi, eta, GridSpec{});
  const auto xv = values_on(xi, grid);
  return quadrature_coeffs(
      theta, grid, theta, c_a, opts,
      [&](int m) {
        std::vector<Complex> p(xv.size());
        for (int k = 0; k < grid.points; ++k) p[k] = xv[k] * std::conj(eta(grid.node(k) + m));
        return p;
      },
      [&](int m, int n) {
        return std::conj(detail::twist_phase(theta, static_cast<long long>(m) * n));
      });
}

InnerProduct inner_B(const SchwartzVector& xi, const SchwartzVector& eta,
                     const InnerProductOptions& opts) {
  require_same_theta(xi.theta(), eta.theta(), "inner_B");
  const double theta = xi.theta();
  const double c_b = inner_b_normalization(theta);
  if (xi.is_gaussian() && eta.is_gaussian()) {
    const auto& g = eta.as_gaussian();
    return assemble(dual_theta(theta), opts, [&](int m, int n) {
      return c_b * overlap(theta, g, right_monomial(xi, m, n).as_gaussian());
    });
  }
  const GridSpec& grid = working_grid(xi, eta, GridSpec{});
  const auto ev = values_on(eta, grid);
  return quadrature_coeffs(
      dual_theta(theta), grid, 1.0, c_b, opts,
      [&](int m) {
        std::vector<Complex> p(ev.size());
        for (int k = 0; k < grid.points; ++k) {
          p[k] = std::conj(xi(grid.node(k) + m / theta)) * ev[k];
        }
        return p;
      },
      [](int, int) { return Complex(1.0); });
}

InnerProduct inner_A_dressed(const SchwartzVector& xi, const DualTorusElement& c,
                             const SchwartzVector& eta, const InnerProductOptions& opts) {
  require_same_theta(xi.theta(), eta.theta(), "inner_A_dressed");
  require_dual(xi, c, "inner_A_dressed");
  if (!xi.is_gaussian() || !eta.is_gaussian()) {
    return inner_A(act_right(xi, c, working_grid(xi, eta, GridSpec{})), eta, opts);
  }
  const double theta = xi.theta();
  const double c_a = inner_a_normalization(theta);
  std::vector<GaussianProfile> dressed;
  std::vector<Complex> weights;
  c.for_each_term([&](LatticePoint k, Complex v) {
    dressed.push_back(right_monomial(xi, k.m, k.n).as_gaussian());
    weights.push_back(v);
  });
  return assemble(theta, opts, [&](int m, int n) {
    const auto target = left_monomial(eta, m, n).as_gaussian();
    Complex acc = 0.0;
    for (std::size_t j = 0; j < dressed.size(); ++j) {
      acc += weights[j] * overlap(theta, dressed[j], target);
    }
    return c_a * acc;
  });
}

Inversion invert_positive(const TorusElement& b, const Tolerance& tol,
                          const InversionOptions& opts) {
  tol.validate();
  const double theta = b.theta();
  const double scale = std::max(1.0, l1_norm(b));
  if (l1_norm(b - adjoint(b)) > tol.algebraic_eps * scale) {
    throw PreconditionError("invert_positive: argument is not self-adjoint");
  }
  const Complex tb = trace(b);
  if (!(tb.real() > 0.0)) throw PreconditionError("invert_positive: trace must be positive");

  const auto one = TorusElement::identity(theta);
  Inversion out;
  out.inverse = TorusElement::scalar(theta, 1.0 / tb.real());
  auto step = [&](const TorusElement& x) {
    const auto r = one - mul(b, x);
    return std::pair{r, l1_norm(r)};
  };
  auto [r, res] = step(out.inverse);
  int rising = 0;
  for (int it = 0;; ++it) {
    out.history.push_back(res);
    if (res <= tol.truncation_eps) break;
    if (it >= opts.max_iterations) {
      throw InversionError("Newton-Schulz iteration budget exhausted", it, res);
    }
    if (out.history.size() >= 2 && res > out.history[out.history.size() - 2]) {
      if (++rising >= opts.divergence_window) {
        throw InversionError("Newton-Schulz residual diverging; not invertible at this truncation",
                             it, res);
      }
    } else {
      rising = 0;
    }
    out.inverse = prune(mul(out.inverse, one + r), opts.drop_relative).element;
    out.iterations = it + 1;
    std::tie(r, res) = step(out.inverse);
  }
  // A couple of extra quadratic steps are nearly free once converged.
  for (int k = 0; k < opts.polish_steps; ++k) {
    auto cand = prune(mul(out.inverse, one + r), opts.drop_relative).element;
    auto [r2, res2] = step(cand);
    if (!(res2 < res)) break;
    out.inverse = std::move(cand);
    r = std::move(r2);
    res = res2;
    ++out.iterations;
    out.history.push_back(res);
  }
  out.residual = res;
  return out;
}

Instanton instanton(double theta, Complex lambda, const Tolerance& tol, int box, bool strict) {
  if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("instanton needs 0 < theta < 1");
  if (box < 1) throw PreconditionError("instanton needs box >= 1");
  tol.validate();
  const auto xi = SchwartzVector::gaussian(theta, 1.0, lambda);
  InnerProductOptions opts;
  opts.box = box;
  opts.tol = tol;
  opts.strict = strict;

  Instanton out;
  out.theta = theta;
  out.lambda = lambda;
  out.box = box;
  out.gram = inner_B(xi, xi, opts).value;
  out.inversion = invert_positive(out.gram, tol);
  auto p = inner_A_dressed(xi, out.inversion.inverse, xi, opts);
  out.projection = std::move(p.value);
  out.tail_mass = p.tail_mass + p.pruned_mass;
  return out;
}

double gaussian_ode_residual(const SchwartzVector& xi, Complex lambda, const GridSpec& grid) {
  const double theta = xi.theta();
  const Complex i(0.0, 1.0);
  if (xi.is_gaussian()) {
    // xi' = -(2 pi theta t + 2 i lambda_xi) xi, so the residual is 2i(lambda - lambda_xi) xi.
    const Complex gap = 2.0 * i * (lambda - xi.as_gaussian().lambda);
    if (gap == Complex(0.0)) return 0.0;
    return std::abs(gap) * grid_max(xi, grid);
  }
  const auto& s = xi.as_sampled();
  const double h = s.grid.spacing();
  double worst = 0.0;
  for (int k = 1; k + 1 < s.grid.points; ++k) {
    const double t = s.grid.node(k);
    const Complex d = (s.values[k + 1] - s.values[k - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(d + (2.0 * kPi * theta * t + 2.0 * i * lambda) * s.values[k]));
  }
  return worst;
}

void to_json(nlohmann::json& j, const SchwartzVector& v) {
  if (v.is_gaussian()) {
    const auto& g = v.as_gaussian();
    j = {{"kind", "gaussian"},
         {"C", {g.amplitude.real(), g.amplitude.imag()}},
         {"theta", v.theta()},
         {"lambda", {g.lambda.real(), g.lambda.imag()}}};
    if (g.log_scale != 0.0) j["log_scale"] = g.log_scale;
    return;
  }
  const auto& s = v.as_sampled();
  auto vals = nlohmann::json::array();
  for (const auto& c : s.values) vals.push_back({c.real(), c.imag()});
  j = {{"kind", "sampled"}, {"theta", v.theta()}, {"L", s.grid.half_width}, {"values", vals}};
}

SchwartzVector schwartz_vector_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const double theta = j.at("theta").get<double>();
  auto cplx = [](const nlohmann::json& a) {
    return Complex(a.at(0).get<double>(), a.at(1).get<double>());
  };
  if (kind == "gaussian") {
    GaussianProfile g{cplx(j.at("C")), cplx(j.at("lambda")), j.value("log_scale", 0.0)};
    return SchwartzVector::gaussian(theta, g);
  }
  if (kind == "sampled") {
    std::vector<Complex> vals;
    for (const auto& a : j.at("values")) vals.push_back(cplx(a));
    GridSpec grid{j.at("L").get<double>(), static_cast<int>(vals.size())};
    return SchwartzVector::sampled(theta, grid, std::move(vals));
  }
  throw PreconditionError("unknown SchwartzVector kind: " + kind);
}

}  // namespace ncsigma
