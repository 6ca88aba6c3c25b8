#include "polyint/fracderiv.hpp"

#include <cmath>
#include <numbers>

#include "polyint/error.hpp"
#include "polyint/quadrature.hpp"
#include "polyint/specialfn.hpp"

namespace polyint {

namespace {

void check_finite(double v) {
  require(std::isfinite(v), ErrorCode::NonIntegrable, "profile integral is not finite");
}

double gl_panel(const std::function<double(double)>& f, double lo, double hi, const IntervalRule& gl) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return half * acc;
}

// Unit panels over the first half of [lo, hi], then panels graded
// geometrically toward hi, where profiles are typically not smooth.
double graded(const std::function<double(double)>& f, double lo, double hi, int order) {
  if (!(hi > lo)) return 0.0;
  const IntervalRule& gl = detail::cached_gauss_jacobi(order, 0.0, 0.0);
  const double mid = lo + 0.5 * (hi - lo);
  const int uniform = std::max(1, static_cast<int>(std::ceil(mid - lo)));
  double acc = 0.0;
  for (int i = 0; i < uniform; ++i)
    acc += gl_panel(f, lo + (mid - lo) * i / uniform, lo + (mid - lo) * (i + 1) / uniform, gl);
  double a = mid;
  for (int i = 2; i < 48; ++i) {
    const double b = hi - (hi - lo) * std::ldexp(1.0, -i);
    acc += gl_panel(f, a, b, gl);
    a = b;
  }
  return acc + gl_panel(f, a, hi, gl);
}

// Graded integral checked against a rule of twice the order.
double checked(const std::function<double(double)>& f, double lo, double hi) {
  const double coarse = graded(f, lo, hi, 16);
  const double fine = graded(f, lo, hi, 32);
  check_finite(fine);
  require(std::abs(fine - coarse) <= 1e-9 * std::max(1.0, std::abs(fine)), ErrorCode::NonIntegrable,
          "profile integral does not converge");
  return fine;
}

// \int_1^inf over dyadic panels until the contributions die out.
double infinite_tail(const std::function<double(double)>& f) {
  const IntervalRule& gl = detail::cached_gauss_jacobi(32, 0.0, 0.0);
  double acc = 0.0;
  int quiet = 0;
  for (int i = 0; i < 90; ++i) {
    const double c = gl_panel(f, std::ldexp(1.0, i), std::ldexp(1.0, i + 1), gl);
    check_finite(c);
    acc += c;
    quiet = (std::abs(c) <= 1e-17 * std::abs(acc) || c == 0.0) ? quiet + 1 : 0;
    if (i >= 4 && quiet >= 3) return acc;
  }
  fail(ErrorCode::NonIntegrable, "tail integral does not converge");
}

double taylor_poly(const std::vector<double>& c, int m, double t) {
  double acc = 0.0;
  for (int k = m - 1; k >= 0; --k) acc = acc * t + c[k];
  return acc;
}

// Largest t at which sum_{k>=m} c_k t^{k-m} has visibly converged, or 0.
double series_radius(const std::vector<double>& c, int m, double a) {
  const int last = static_cast<int>(c.size()) - 1;
  if (last < m) return 0.0;
  for (double t = a; t >= 1e-3 * a; t *= 0.5) {
    double sum = 0.0;
    for (int k = m; k <= last; ++k) sum += std::abs(c[k]) * std::pow(t, k - m);
    double tail = std::abs(c[last]) * std::pow(t, last - m);
    if (last > m) tail += std::abs(c[last - 1]) * std::pow(t, last - 1 - m);
    if (tail <= 1e-16 * sum || sum == 0.0) return t;
  }
  return 0.0;
}

// Bracketed sum of the three-term continuation with Taylor order m
// (m = 0 is the plain Mellin-type integral), before the 1/Gamma(-q) factor.
double continuation_sum(const ProfileFn& h, double q, int m) {
  require(static_cast<bool>(h.eval), ErrorCode::InvalidSpec, "profile has no evaluation callback");
  require(h.support > 0.0, ErrorCode::InvalidSpec, "profile support must be positive");
  const auto& c = h.taylor;
  const double a = std::min(1.0, h.support);
  const double ts = series_radius(c, m, 0.5 * a);

  // R(t) / t^m with R = h - T_{m-1}.
  auto reduced = [&](double t) {
    if (m > 0 && t <= ts) {
      double acc = 0.0;
      for (int k = static_cast<int>(c.size()) - 1; k >= m; --k) acc = acc * t + c[k];
      return acc;
    }
    return (h.eval(t) - taylor_poly(c, m, t)) / std::pow(t, m);
  };

  // [0, a/2]: Jacobi weight t^{m-1-q}.
  const IntervalRule& gj = detail::cached_gauss_jacobi(48, 0.0, m - 1.0 - q);
  const double half = 0.5 * a;
  double near = 0.0;
  for (std::size_t i = 0; i < gj.size(); ++i) near += gj.weights[i] * reduced(0.5 * half * (1.0 + gj.nodes[i]));
  near *= std::pow(0.5 * half, m - q);
  check_finite(near);

  const double far = checked([&](double t) { return std::pow(t, -1.0 - q) * (h.eval(t) - taylor_poly(c, m, t)); },
                             half, a);

  // Past the support h = 0, leaving only the Taylor polynomial on [a, 1].
  double gap = 0.0;
  for (int k = 0; k < m && a < 1.0; ++k) gap -= c[k] * (1.0 - std::pow(a, k - q)) / (k - q);

  double tail = 0.0;
  if (h.support > 1.0) {
    auto g = [&](double t) { return std::pow(t, -1.0 - q) * h.eval(t); };
    tail = std::isfinite(h.support) ? checked(g, 1.0, h.support) : infinite_tail(g);
  }

  double moments = 0.0;
  for (int k = 0; k < m; ++k) moments += c[k] / (k - q);
  return near + far + gap + tail + moments;
}

bool is_integer(double q) { return q == std::round(q); }

}  // namespace

std::vector<double> taylor_from_samples(const std::function<double(double)>& f, double a, double b,
                                        int count, int nodes) {
  require(a <= 0.0 && b > 0.0 && a < b, ErrorCode::InvalidSpec, "taylor_from_samples: need a <= 0 < b");
  require(count >= 1 && nodes >= count, ErrorCode::OrderOutOfRange, "taylor_from_samples: bad sizes");
  const double pi = std::numbers::pi;
  std::vector<double> fx(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double x = std::cos(pi * (j + 0.5) / nodes);
    fx[j] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
  }
  std::vector<double> coef(nodes, 0.0);
  for (int k = 0; k < nodes; ++k) {
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) s += fx[j] * std::cos(pi * k * (j + 0.5) / nodes);
    coef[k] = 2.0 * s / nodes;
  }
  coef[0] *= 0.5;

  const double x0 = -(a + b) / (b - a);
  auto clenshaw = [&](const std::vector<double>& cc) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(cc.size()) - 1; k >= 1; --k) {
      const double t = 2.0 * x0 * b1 - b2 + cc[k];
      b2 = b1;
      b1 = t;
    }
    return x0 * b1 - b2 + cc[0];
  };

  std::vector<double> out(count);
  const double scale = 2.0 / (b - a);
  double factor = 1.0;  // scale^k / k!
  for (int k = 0; k < count; ++k) {
    out[k] = clenshaw(coef) * factor;
    // Chebyshev series of the derivative.
    const int len = static_cast<int>(coef.size());
    std::vector<double> d(std::max(len - 1, 1), 0.0);
    for (int j = len - 1; j >= 1; --j) d[j - 1] = (j + 1 < len - 1 ? d[j + 1] : 0.0) + 2.0 * j * coef[j];
    if (len > 1) d[0] *= 0.5;
    coef = std::move(d);
    factor *= scale / (k + 1);
  }
  return out;
}

double frac_deriv_strip(const ProfileFn& h, double q) {
  require(q > -1.0 && q < 0.0, ErrorCode::OrderOutOfRange, "frac_deriv_strip needs -1 < q < 0");
  return rgamma(-q) * continuation_sum(h, q, 0);
}

double frac_deriv(const ProfileFn& h, double q, int m) {
  require(std::isfinite(q) && q > -1.0, ErrorCode::OrderOutOfRange, "fractional order must exceed -1");
  require(!is_integer(q), ErrorCode::IntegerOrder, "integer order: use frac_deriv_integer");
  require(m >= 0 && m > q, ErrorCode::InsufficientTaylor, "Taylor order M must exceed q");
  require(static_cast<int>(h.taylor.size()) >= m, ErrorCode::InsufficientTaylor,
          "profile has fewer than M Taylor coefficients");
  return rgamma(-q) * continuation_sum(h, q, m);
}

double frac_deriv(const ProfileFn& h, double q) {
  require(std::isfinite(q), ErrorCode::OrderOutOfRange, "fractional order must be finite");
  return frac_deriv(h, q, static_cast<int>(std::round(q)) + 1);
}

double frac_deriv_integer(const ProfileFn& h, int k) {
  require(k >= 0, ErrorCode::OrderOutOfRange, "integer order must be >= 0");
  require(static_cast<int>(h.taylor.size()) > k, ErrorCode::InsufficientTaylor,
          "profile lacks the requested Taylor coefficient");
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return (k % 2 == 0 ? 1.0 : -1.0) * fact * h.taylor[k];
}

double fractional_derivative(const ProfileFn& h, double q) {
  require(std::isfinite(q) && q > -1.0, ErrorCode::OrderOutOfRange, "fractional order must exceed -1");
  if (is_integer(q)) return frac_deriv_integer(h, static_cast<int>(q));
  return frac_deriv(h, q);
}

}  // namespace polyint
