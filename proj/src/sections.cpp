#include "polyint/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyint/error.hpp"
#include "polyint/fracderiv.hpp"
#include "polyint/parallel.hpp"
#include "polyint/polytope.hpp"
#include "polyint/quadrature.hpp"
#include "polyint/specialfn.hpp"

namespace polyint {

namespace {

constexpr double kDeepGauge = 2.0 / 3.0;

void check_m(const Body& body, int m) {
  require(m >= 1 && m <= body.dim() - 1, ErrorCode::OrderOutOfRange, "m must satisfy 1 <= m <= n-1");
}

void check_xi(const Body& body, const Direction& xi) {
  require(xi.dim() == body.dim(), ErrorCode::DimensionOutOfRange, "direction has the wrong dimension");
}

int polytope_order_for(const SectionOptions& opt) {
  require(opt.polytope_order >= 2 && opt.polytope_order <= 64, ErrorCode::OrderOutOfRange,
          "polytope order must be in [2, 64]");
  return opt.polytope_order;
}

// In-plane direction of the nearest boundary point seen from p: start from
// the projected gauge gradient and iterate on the boundary normal at the exit
// point, which is parallel to the ray at the minimizer of rho_p.
Vec focus_pole(const Body& body, const Vec& p, const Direction& xi, const Mat& basis) {
  auto project = [&](const Vec& g) -> Vec { return g - g.dot(xi.vec()) * xi.vec(); };
  Vec u = project(body.gauge_gradient(p));
  if (!(u.norm() > 1e-10 * std::max(1.0, body.gauge_gradient(p).norm()))) return basis.col(0);
  u.normalize();
  for (int it = 0; it < 6; ++it) {
    const Vec b = p + body.ray_exit(p, u) * u;
    Vec next = project(body.gauge_gradient(b));
    if (!(next.norm() > 0.0) || !next.allFinite()) break;
    next.normalize();
    const double moved = (next - u).norm();
    u = next;
    if (moved < 1e-12) break;
  }
  return u;
}

double focused_integral(const Body& body, int m, const Direction& xi, const Vec& p, int degree) {
  const int n = body.dim();
  const Mat basis = complement_basis(xi);
  auto rho_m = [&](const Vec& th) { return std::pow(body.ray_exit(p, th), m); };
  if (n == 2) return rho_m(basis.col(0)) + rho_m(-basis.col(0));

  const int d = n - 1;  // the section sphere is S^{d-1}
  const Vec u = focus_pole(body, p, xi, basis);
  const Mat w = basis * complement_basis(Direction::normalized(basis.transpose() * u));
  const SphereRule& omega = detail::cached_sphere_rule(d - 1, degree);

  // With p close to the boundary, rho_p(theta) has complex singularities at
  // distance ~ sqrt(1 - gauge(p)) from the directions tangent to the boundary,
  // i.e. phi = pi/2 from the normal pole. Panels shrink geometrically onto
  // pi/2 from both sides.
  const double depth = std::max(0.0, 1.0 - body.gauge(p));
  const double sigma = std::clamp(std::sqrt(depth) * body.min_radial() / body.max_radial(), 1e-8, 0.25);
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> offsets;
  for (double e = sigma / 8.0; e < half_pi; e *= 2.0) offsets.push_back(e);
  if (half_pi - offsets.back() < 0.5 * offsets.back()) offsets.pop_back();
  std::vector<double> edges{0.0};
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) edges.push_back(half_pi - *it);
  edges.push_back(half_pi);
  for (double e : offsets) edges.push_back(half_pi + e);
  edges.push_back(std::numbers::pi);

  // The panels are graded, so the polar rule needs fewer points than the ring.
  const IntervalRule& gl = detail::cached_gauss_jacobi(std::max(16, degree / 3 + 1), 0.0, 0.0);
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double half = 0.5 * (edges[s + 1] - edges[s]), mid = 0.5 * (edges[s + 1] + edges[s]);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double phi = mid + half * gl.nodes[i];
      const double sp = std::sin(phi), cp = std::cos(phi);
      double ring = 0.0;
      for (Eigen::Index j = 0; j < omega.size(); ++j)
        ring += omega.weights[j] * rho_m(cp * u + sp * (w * omega.nodes.col(j)));
      acc += half * gl.weights[i] * std::pow(sp, d - 2) * ring;
    }
  }
  return acc;
}

double uniform_integral(const Body& body, int m, const Direction& xi, const Vec& p, int degree) {
  const SubsphereRule rule = subsphere_rule(xi, degree);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double r = body.ray_exit(p, rule.nodes.col(j));
    double rm = r;
    for (int k = 1; k < m; ++k) rm *= r;
    acc += rule.weights[j] * rm;
  }
  return acc;
}

// Signed-permutation symmetry of the body, probed through the gauge at a
// few fixed points: invariance under each coordinate flip, and under each
// adjacent transposition (which generate all permutations).
struct Symmetry {
  bool signs = false;
  bool permutations = false;
};

Symmetry detect_symmetry(const Body& body) {
  const int n = body.dim();
  std::vector<Vec> probes;
  for (std::uint64_t k = 0; k < 6; ++k) {
    Vec x(n);
    for (int i = 0; i < n; ++i)
      x[i] = static_cast<double>(detail::splitmix64(k * 64 + i) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    probes.push_back(x * (0.5 * body.min_radial() / x.norm()));
  }
  auto invariant = [&](auto&& act) {
    for (const Vec& x : probes) {
      const double g = body.gauge(x), h = body.gauge(act(x));
      if (std::abs(g - h) > 1e-12 * std::max(1.0, g)) return false;
    }
    return true;
  };
  Symmetry s{true, true};
  for (int i = 0; i < n && s.signs; ++i)
    s.signs = invariant([i](Vec y) { y[i] = -y[i]; return y; });
  for (int i = 0; i + 1 < n && s.permutations; ++i)
    s.permutations = invariant([i](Vec y) { std::swap(y[i], y[i + 1]); return y; });
  return s;
}

struct OuterRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;
};

// Quadrature for \int_{S^{n-1}} f over directions, for f invariant under the
// body's symmetries. With full hyperoctahedral symmetry only the chamber
// xi_1 >= ... >= xi_n >= 0 is integrated (times 2^n n!), parametrized by
// y = (1, s_1, s_1 s_2, ...) on [0,1]^{n-1}; with sign symmetry only the
// positive orthant, in polar angles on [0, pi/2]. Each parameter gets
// degree/2 + 1 Gauss-Legendre points.
//
// For polytope sections at offset t (kink_offset), A(xi) has kinks where
// <v, xi> = t for a vertex v. On the face s_1 = ... = s_{k-1} = 1 of the
// chamber, y = (1, ..., 1, s_k u) with u = (1, s_{k+1}, s_{k+1} s_{k+2}, ...),
// so the kinks met along s_k are roots of the quadratic
// (c + s_k <v'', u>)^2 = t^2 (k + s_k^2 |u|^2), c the sum of the first k
// coordinates of v. The two innermost parameters are split there, and every
// piece gets the full degree/2 + 1 points.
OuterRule outer_rule(const Body& body, int degree, double kink_offset = std::numeric_limits<double>::quiet_NaN()) {
  const int n = body.dim();
  const Symmetry sym = detect_symmetry(body);
  OuterRule out;
  if (!sym.signs) {
    const SphereRule& rule = detail::cached_sphere_rule(n, degree);
    for (Eigen::Index j = 0; j < rule.size(); ++j) {
      out.nodes.push_back(rule.nodes.col(j));
      out.weights.push_back(rule.weights[j]);
    }
    return out;
  }
  const int q = degree / 2 + 1;
  const int d = n - 1;
  const PolytopeGeometry* geo = body.as_polytope();
  const bool split = sym.permutations && geo != nullptr && std::isfinite(kink_offset);
  const int split_levels = split ? std::min(d, 2) : 0;
  const double t = kink_offset;
  double group = std::ldexp(1.0, n);
  if (sym.permutations)
    for (int i = 2; i <= n; ++i) group *= i;
  const double half_pi = 0.5 * std::numbers::pi;

  Vec s(d);
  auto emit = [&](double w) {
    Vec xi(n);
    if (sym.permutations) {
      // dsigma = |det[y, dy/ds]| / |y|^n for the radial projection of y(s).
      Mat jac = Mat::Zero(n, n);
      Vec y(n);
      y[0] = 1.0;
      for (int i = 1; i < n; ++i) y[i] = y[i - 1] * s[i - 1];
      jac.col(0) = y;
      for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          double prod = 1.0;
          for (int l = 0; l < i; ++l)
            if (l != j) prod *= s[l];
          jac(i, j + 1) = prod;
        }
      w *= std::abs(jac.determinant()) / std::pow(y.norm(), n);
      xi = y.normalized();
    } else {
      double sines = 1.0;
      for (int i = 0; i < d; ++i) {
        const double phi = half_pi * s[i];
        xi[i] = sines * std::cos(phi);
        w *= half_pi * std::pow(std::sin(phi), d - 1 - i);
        sines *= std::sin(phi);
      }
      xi[d] = sines;
    }
    out.nodes.push_back(xi);
    out.weights.push_back(w);
  };

  // Kink locations along s_k (0-based k) for fixed s_{k+1}, ... .
  auto cuts_at = [&](int k) {
    std::vector<double> cuts{0.0, 1.0};
    if (k >= split_levels) return cuts;
    const int len = n - k - 1;
    Vec u(len);
    u[0] = 1.0;
    for (int j = 1; j < len; ++j) u[j] = u[j - 1] * s[k + j];
    const double bb = u.squaredNorm(), ones = k + 1;
    for (const Vec& v : geo->vertices) {
      const double c = v.head(k + 1).sum(), a = v.tail(len).dot(u);
      const double qa = a * a - t * t * bb, qb = 2.0 * c * a, qc = c * c - t * t * ones;
      auto keep = [&](double r) {
        if (r > 1e-14 && r < 1.0 - 1e-14 && (t == 0.0 || (c + r * a) * t > 0.0)) cuts.push_back(r);
      };
      if (std::abs(qa) <= 1e-15 * (a * a + t * t * bb)) {
        if (qb != 0.0) keep(-qc / qb);
      } else if (const double disc = qb * qb - 4.0 * qa * qc; disc >= 0.0) {
        const double r1 = (-qb - std::copysign(std::sqrt(disc), qb)) / (2.0 * qa);
        keep(r1);
        if (r1 != 0.0) keep(qc / (qa * r1));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
  };

  // Outermost parameter first, so the cuts of s_k can use s_{k+1}, ... .
  auto recurse = [&](auto&& self, int k, double w) -> void {
    if (k < 0) {
      emit(w);
      return;
    }
    const std::vector<double> cuts = cuts_at(k);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], len = cuts[c + 1] - cuts[c];
      if (len <= 1e-14) continue;
      const int order = q;
      const IntervalRule& r = detail::cached_gauss_jacobi(order, 0.0, 0.0);
      for (std::size_t i = 0; i < r.size(); ++i) {
        s[k] = lo + 0.5 * len * (1.0 + r.nodes[i]);
        self(self, k - 1, w * 0.5 * len * r.weights[i]);
      }
    }
  };
  recurse(recurse, d - 1, group);
  return out;
}

double power_sphere_integral(const Body& body, const std::function<double(double)>& phi, int degree,
                             int polytope_order) {
  if (const PolytopeGeometry* geo = body.as_polytope())
    return polytope_sphere_integral(geo->normals, geo->offsets, geo->vertices, phi, polytope_order);
  const OuterRule rule = outer_rule(body, degree);
  const Vec zero = Vec::Zero(body.dim());
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) acc += rule.weights[j] * phi(body.ray_exit(zero, rule.nodes[j]));
  return acc;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

}  // namespace

double dual_volume(const Body& body, int i, int degree) {
  const int n = body.dim();
  require(i >= 0 && i <= n, ErrorCode::OrderOutOfRange, "dual volume index must satisfy 0 <= i <= n");
  if (i == 0) return kappa(n);
  return power_sphere_integral(body, [i](double r) { return std::pow(r, i); }, degree, 10) / n;
}

OffsetInterval admissible_interval(const Body& body, const Direction& xi) {
  check_xi(body, xi);
  return {-body.radial(-xi), body.radial(xi)};
}

double section_dual_volume(const Body& body, int m, const Direction& xi, double t, const SectionOptions& opt) {
  check_m(body, m);
  check_xi(body, xi);
  require(std::isfinite(t), ErrorCode::PointNotInterior, "offset must be finite");
  const Vec p = t * xi.vec();
  require(body.gauge(p) < 1.0, ErrorCode::PointNotInterior, "offset outside the admissible interval");
  const int n = body.dim();

  SectionMethod method = opt.method;
  int uniform_degree = opt.degree;
  if (method == SectionMethod::Auto) {
    // Deep points see a smooth rho_p; the focused panels only pay off near
    // the boundary. A doubled uniform rule is still far cheaper there.
    if (body.as_polytope()) method = SectionMethod::Exact;
    else if (body.gauge(p) < kDeepGauge) {
      method = SectionMethod::Uniform;
      uniform_degree = 2 * opt.degree;
    } else {
      method = SectionMethod::Focused;
    }
  }
  double integral = 0.0;
  switch (method) {
    case SectionMethod::Exact: {
      const PolytopeGeometry* geo = body.as_polytope();
      require(geo != nullptr, ErrorCode::InvalidSpec, "exact sections need a polytope");
      integral = polytope_section_integral(*geo, p, xi.vec(), complement_basis(xi),
                                           [m](double r) { return std::pow(r, m); }, polytope_order_for(opt));
      break;
    }
    case SectionMethod::Uniform:
      integral = uniform_integral(body, m, xi, p, uniform_degree);
      break;
    default:
      integral = focused_integral(body, m, xi, p, opt.degree);
  }
  return integral / (n - 1);
}

SectionFunctionSamples section_function(const Body& body, int m, const Direction& xi, int grid_size,
                                        double margin, const SectionOptions& opt, int threads) {
  check_m(body, m);
  require(grid_size >= 8, ErrorCode::DegenerateGrid, "section grid needs at least 8 points");
  require(margin > 0.0 && margin < 0.5, ErrorCode::DegenerateGrid, "margin factor must be in (0, 0.5)");
  const OffsetInterval iv = admissible_interval(body, xi);
  const double delta = margin * body.min_radial();
  SectionFunctionSamples out{xi, m, iv.lo + delta, iv.hi - delta, {}, {}};
  require(out.lo < out.hi, ErrorCode::DegenerateGrid, "admissible interval is empty after the margin");
  const double mid = 0.5 * (out.lo + out.hi), half = 0.5 * (out.hi - out.lo);
  out.t.resize(grid_size);
  for (int j = 0; j < grid_size; ++j) out.t[j] = mid - half * std::cos(std::numbers::pi * (j + 0.5) / grid_size);
  out.values.resize(grid_size);
  parallel_for(grid_size, threads, [&](std::size_t j) { out.values[j] = section_dual_volume(body, m, xi, out.t[j], opt); });
  return out;
}

IdentityCheck moment_identity_check(const Body& body, int m, double t, int outer_degree,
                                    const SectionOptions& inner, int threads) {
  check_m(body, m);
  require(std::abs(t) < body.min_radial(), ErrorCode::TOutOfRange, "|t| must be below the minimal radius");
  const int n = body.dim();

  IdentityCheck out;
  const double tt = t * t;
  // The right side costs one ray per node, so it gets a doubled rule.
  out.rhs = kappa(n - 1) * power_sphere_integral(body, [&](double r) { return std::pow(r * r - tt, 0.5 * m); },
                                                 2 * outer_degree, polytope_order_for(inner));

  const OuterRule rule = outer_rule(body, outer_degree, t);
  std::vector<double> vals(rule.nodes.size());
  parallel_for(vals.size(), threads, [&](std::size_t j) {
    vals[j] = rule.weights[j] * section_dual_volume(body, m, Direction::normalized(rule.nodes[j]), t, inner);
  });
  for (double v : vals) out.lhs += v;
  return out;
}

SteinerReport dual_steiner_check(const Body& body, const std::vector<double>& eps_grid, int degree) {
  const int n = body.dim();
  std::vector<double> eps = eps_grid;
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  require(static_cast<int>(eps.size()) >= n + 1, ErrorCode::DegenerateGrid, "Steiner fit needs n + 1 distinct eps");
  for (double e : eps) require(e > 0.0 && std::isfinite(e), ErrorCode::DegenerateGrid, "eps must be positive");

  SteinerReport out;
  out.eps = eps;
  const Body unit = Body::ball(n);
  const auto k = static_cast<Eigen::Index>(eps.size());
  Mat a(k, n + 1);
  Vec y(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    y[r] = dual_volume(radial_sum(body, unit, 1.0, eps[r]), n, degree);
    out.volumes.push_back(y[r]);
    for (int j = 0; j <= n; ++j) a(r, j) = std::pow(eps[r], j);
  }
  const Vec c = a.colPivHouseholderQr().solve(y);
  out.coefficients.assign(c.data(), c.data() + c.size());
  out.residual = (a * c - y).norm() / y.norm();
  for (int i = 0; i <= n; ++i) out.targets.push_back(binomial(n, i) * dual_volume(body, n - i, degree));
  return out;
}

KubotaCheck dual_kubota_check(const Body& body, int i, int samples, std::uint64_t seed, int degree, int threads) {
  const int n = body.dim();
  require(i >= 1 && i <= n - 1, ErrorCode::OrderOutOfRange, "Kubota index must satisfy 1 <= i <= n-1");
  require(samples >= 2, ErrorCode::OrderOutOfRange, "Kubota check needs at least 2 samples");
  KubotaCheck out;
  out.lhs = dual_volume(body, i, degree);

  const SphereRule& rule = detail::cached_sphere_rule(i, degree);
  const double factor = kappa(n) / kappa(i);
  const Vec zero = Vec::Zero(n);
  std::vector<double> vals(samples);
  parallel_for(vals.size(), threads, [&](std::size_t s) {
    const Mat frame = haar_frame(n, i, seed, s);
    double vol = 0.0;
    for (Eigen::Index j = 0; j < rule.size(); ++j)
      vol += rule.weights[j] * std::pow(body.ray_exit(zero, frame * rule.nodes.col(j)), i);
    vals[s] = factor * vol / i;
  });
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= samples;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= samples - 1;
  out.rhs = mean;
  out.std_error = std::sqrt(var / samples);
  return out;
}

double frac_deriv_of_section(const Body& body, int m, const Direction& xi, double q, const SectionOptions& opt) {
  check_m(body, m);
  require(std::isfinite(q) && q > -1.0, ErrorCode::OrderOutOfRange, "fractional order must exceed -1");
  const OffsetInterval iv = admissible_interval(body, xi);
  auto section = [&](double t) { return section_dual_volume(body, m, xi, t, opt); };

  ProfileFn h;
  h.support = iv.hi;
  h.eval = [&, hi = iv.hi](double t) {
    if (t >= hi || body.gauge(t * xi.vec()) >= 1.0) return 0.0;
    return section(t);
  };
  const int count = static_cast<int>(std::max(0.0, std::round(q))) + 6;
  h.taylor = taylor_from_samples(section, 0.5 * iv.lo, 0.5 * iv.hi, count, 24);
  return fractional_derivative(h, q);
}

}  // namespace polyint
