#include "polyint/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polyint/error.hpp"
#include "polyint/fracderiv.hpp"
#include "polyint/parallel.hpp"

namespace polyint {

namespace {

void require_even_m(int m) {
  require(m % 2 == 0, ErrorCode::OddM, "kernel is polynomial only for even m");
  require(m >= 2, ErrorCode::OrderOutOfRange, "m must be >= 2");
}

}  // namespace

double funk_hecke_multiplier(const ZonalKernel& kernel, int l, int n, const IntervalRule& rule,
                             bool cos_substitution) {
  require(static_cast<bool>(kernel.profile), ErrorCode::InvalidSpec, "kernel has no profile");
  const RationalPoly p = legendre_nd(l, n).poly;
  const double e = 0.5 * (n - 3);

  if (n == 2 && (rule.alpha != -0.5 || rule.beta != -0.5)) {
    require(cos_substitution, ErrorCode::EndpointSingularity,
            "n = 2 weight is singular at +-1; use the cos substitution");
    // t = cos(phi): the weight (1 - t^2)^{-1/2} dt becomes d phi on [0, pi].
    const IntervalRule& gl = detail::cached_gauss_jacobi(static_cast<int>(rule.size()), 0.0, 0.0);
    return gl.integrate([&](double phi) {
      const double t = std::cos(phi);
      return kernel.profile(t) * p.evaluate(t);
    }, 0.0, std::numbers::pi);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    double w = rule.weights[i];
    if (e != rule.alpha) w *= std::pow(1.0 - t, e - rule.alpha);
    if (e != rule.beta) w *= std::pow(1.0 + t, e - rule.beta);
    acc += w * kernel.profile(t) * p.evaluate(t);
  }
  return acc;
}

std::vector<Harmonic> builtin_harmonics(int l, int n) {
  require(n >= 2 && n <= 8, ErrorCode::DimensionOutOfRange, "harmonics need 2 <= n <= 8");
  require(l >= 0 && l <= 4, ErrorCode::OrderOutOfRange, "built-in harmonics stop at degree 4");
  std::vector<Harmonic> out;
  auto add = [&](std::string name, std::function<double(const Vec&)> f) { out.push_back({l, std::move(name), std::move(f)}); };
  switch (l) {
    case 0:
      add("1", [](const Vec&) { return 1.0; });
      break;
    case 1:
      add("x1", [](const Vec& x) { return x[0]; });
      add("xn", [n](const Vec& x) { return x[n - 1]; });
      break;
    case 2:
      add("x1*x2", [](const Vec& x) { return x[0] * x[1]; });
      // x1^2 - |x|^2 / n, restricted to the sphere.
      add("x1^2-1/n", [n](const Vec& x) { return x[0] * x[0] - 1.0 / n; });
      break;
    case 3:
      if (n >= 3) add("x1*x2*x3", [](const Vec& x) { return x[0] * x[1] * x[2]; });
      add("x1^3-3*x1*x2^2", [](const Vec& x) { return x[0] * x[0] * x[0] - 3.0 * x[0] * x[1] * x[1]; });
      break;
    default:
      if (n >= 4) add("x1*x2*x3*x4", [](const Vec& x) { return x[0] * x[1] * x[2] * x[3]; });
      add("x1^4-6*x1^2*x2^2+x2^4", [](const Vec& x) {
        const double a = x[0] * x[0], b = x[1] * x[1];
        return a * a - 6.0 * a * b + b * b;
      });
  }
  return out;
}

OperatorNormCheck operator_norm_check(const ZonalKernel& kernel, int l, int n,
                                      const std::vector<Direction>& xi_grid, int degree) {
  const auto harmonics = builtin_harmonics(l, n);
  OperatorNormCheck out;
  const int order = std::max(degree / 2 + 2, l + 2);
  out.lambda = n == 2 ? funk_hecke_multiplier(kernel, l, n, detail::cached_gauss_jacobi(order, -0.5, -0.5))
                      : funk_hecke_multiplier(kernel, l, n, detail::cached_gauss_jacobi(order, 0.5 * (n - 3), 0.5 * (n - 3)));
  const double area = sphere_area(n - 1);
  const SphereRule& rule = detail::cached_sphere_rule(n, degree);
  for (const Direction& xi : xi_grid) {
    require(xi.dim() == n, ErrorCode::DimensionOutOfRange, "direction has the wrong dimension");
    for (const auto& h : harmonics) {
      double lhs = 0.0;
      for (Eigen::Index j = 0; j < rule.size(); ++j) {
        const Vec theta = rule.nodes.col(j);
        lhs += rule.weights[j] * kernel.profile(xi.vec().dot(theta)) * h.eval(theta);
      }
      out.scale = std::max(out.scale, std::abs(lhs));
      out.max_deviation = std::max(out.max_deviation, std::abs(lhs - area * out.lambda * h.eval(xi.vec())));
    }
  }
  return out;
}

double lambda_numeric(int l, double q, int m, int n) {
  require(q > -1.0 && q < 0.0, ErrorCode::OrderOutOfRange, "lambda_numeric needs -1 < q < 0");
  require(m >= 1, ErrorCode::OrderOutOfRange, "m must be >= 1");
  const RationalPoly p = legendre_nd(l, n).poly;
  // z = (1 + x) / 2 carries z^{-1-q} (1 - z)^{(m-2)/2} into the Jacobi weight;
  // (1 + z)^{(m-2)/2} P(z) is smooth on [0, 1].
  const double alpha = 0.5 * (m - 2), beta = -1.0 - q;
  const IntervalRule& gj = detail::cached_gauss_jacobi(std::max(64, l + m + 8), alpha, beta);
  double acc = 0.0;
  for (std::size_t i = 0; i < gj.size(); ++i) {
    const double z = 0.5 * (1.0 + gj.nodes[i]);
    acc += gj.weights[i] * p.evaluate(z) * std::pow(1.0 + z, alpha);
  }
  return rgamma(-q) * std::pow(2.0, -1.0 - alpha - beta) * acc;
}

double lambda_continuation(int l, double q, int m, int n) {
  require_even_m(m);
  const RationalPoly kp = kernel_poly(l, m, n);
  ProfileFn h;
  h.eval = [kp](double t) { return t <= 1.0 ? kp.evaluate(t) : 0.0; };
  h.taylor = kp.to_doubles();
  const std::size_t need = static_cast<std::size_t>(std::max(0.0, std::round(q)) + 4);
  if (h.taylor.size() < need) h.taylor.resize(need, 0.0);
  h.support = 1.0;
  return frac_deriv(h, q);
}

Rational lambda_exact(int l, int k, int m, int n) {
  require_even_m(m);
  require(k >= 0, ErrorCode::OrderOutOfRange, "k must be >= 0");
  Rational v = kernel_poly(l, m, n).coeff(k);
  for (int j = 2; j <= k; ++j) v *= j;
  return k % 2 == 0 ? v : Rational(-v);
}

bool vanishing_predicate(int l, int k, int m) {
  require_even_m(m);
  require(l >= 0 && k >= 0, ErrorCode::OrderOutOfRange, "l and k must be >= 0");
  return (k - l) % 2 == 0 && m >= k - l + 2;
}

const MultiplierEntry& MultiplierTable::at(int l, int k, int m, int n) const {
  const auto mi = std::find(ms.begin(), ms.end(), m);
  const auto ni = std::find(ns.begin(), ns.end(), n);
  require(l >= 0 && l <= l_max && k >= 0 && k <= l_max && mi != ms.end() && ni != ns.end(),
          ErrorCode::OrderOutOfRange, "tuple outside the multiplier table");
  const std::size_t idx =
      ((static_cast<std::size_t>(l) * (l_max + 1) + k) * ms.size() + (mi - ms.begin())) * ns.size() + (ni - ns.begin());
  return entries[idx];
}

MultiplierTable build_multiplier_table(int l_max, std::vector<int> ms, std::vector<int> ns, int threads) {
  require(l_max >= 0, ErrorCode::OrderOutOfRange, "l_max must be >= 0");
  require(!ms.empty() && !ns.empty(), ErrorCode::OrderOutOfRange, "empty m or n list");
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int m : ms) require_even_m(m);
  for (int n : ns) require(n >= 2, ErrorCode::DimensionOutOfRange, "n must be >= 2");

  MultiplierTable t;
  t.l_max = l_max;
  t.ms = std::move(ms);
  t.ns = std::move(ns);
  const std::size_t side = l_max + 1;
  t.entries.resize(side * side * t.ms.size() * t.ns.size());
  parallel_for(t.entries.size(), threads, [&](std::size_t idx) {
    std::size_t r = idx;
    const int n = t.ns[r % t.ns.size()];
    r /= t.ns.size();
    const int m = t.ms[r % t.ms.size()];
    r /= t.ms.size();
    const int k = static_cast<int>(r % side), l = static_cast<int>(r / side);
    t.entries[idx] = {l, k, m, n, lambda_exact(l, k, m, n), vanishing_predicate(l, k, m)};
  });
  return t;
}

std::string multiplier_table_csv(const MultiplierTable& table) {
  std::ostringstream os;
  os << "l,k,m,n,numerator,denominator,is_zero,predicted_zero\n";
  for (const auto& e : table.entries) {
    os << e.l << ',' << e.k << ',' << e.m << ',' << e.n << ',' << numerator(e.value).str() << ','
       << denominator(e.value).str() << ',' << (e.value == 0 ? 1 : 0) << ',' << (e.predicted_nonzero ? 0 : 1) << '\n';
  }
  return os.str();
}

}  // namespace polyint
