#include "polyint/bodies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "polyint/error.hpp"
#include "polyint/quadrature.hpp"

namespace polyint {

struct Body::Impl {
  int n = 0;
  BodyFamily family = BodyFamily::Ellipsoid;

  EllipsoidSpec ell;
  LpBallSpec lp;
  double lp_bound = 0.0;  // radius of a centred Euclidean ball containing the lp ball
  bool centered = false;
  std::shared_ptr<const PolytopeGeometry> poly;

  std::shared_ptr<const Impl> a, b;  // radial sum operands, or a = shifted inner
  double alpha = 0.0, beta = 0.0;
  Vec shift;

  double min_r = 0.0;
  double max_r = 0.0;

  double ray_exit(Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) const;
  double gauge(const Vec& x) const;
};

namespace {

// Stack-allocated vector for the per-ray temporaries (n <= 8).
using Small = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

void check_dim(int n) {
  require(n >= 2 && n <= 8, ErrorCode::DimensionOutOfRange, "dimension must be in [2, 8], got " + std::to_string(n));
}

// x^p for x >= 0, by repeated squaring when p is a small integer.
double power(double x, double p) {
  if (p != std::floor(p) || p < 0.0 || p > 64.0) return std::pow(x, p);
  double acc = 1.0;
  for (auto k = static_cast<unsigned>(p); k != 0; k >>= 1) {
    if (k & 1u) acc *= x;
    x *= x;
  }
  return acc;
}

double lp_norm(Eigen::Ref<const Vec> u, double p) {
  const double big = u.cwiseAbs().maxCoeff();
  if (big == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) s += power(std::abs(u[i]) / big, p);
  return big * std::pow(s, 1.0 / p);
}

double ellipsoid_exit(const EllipsoidSpec& e, Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) {
  // Hand-rolled loops: Eigen's dynamic gemv dominates at n <= 8.
  const Eigen::Index n = theta.size();
  double y[8];
  for (Eigen::Index i = 0; i < n; ++i) y[i] = p[i] - e.center[i];
  double qa = 0.0, qb = 0.0, qc = -1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* col = e.shape.data() + j * e.shape.rows();
    double at = 0.0, ay = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      at += col[i] * theta[i];
      ay += col[i] * y[i];
    }
    qa += theta[j] * at;
    qb += y[j] * at;
    qc += y[j] * ay;
  }
  qb *= 2.0;
  const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
  if (qb >= 0.0) return std::max(0.0, -2.0 * qc / (qb + disc));
  return (-qb + disc) / (2.0 * qa);
}

double polytope_exit(const PolytopeGeometry& g, Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index rows = g.normals.rows(), n = theta.size();
  for (Eigen::Index i = 0; i < rows; ++i) {
    double at = 0.0, ap = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      at += g.normals(i, j) * theta[j];
      ap += g.normals(i, j) * p[j];
    }
    if (at > 0.0) best = std::min(best, std::max(0.0, g.offsets[i] - ap) / at);
  }
  require(std::isfinite(best), ErrorCode::NonStarShaped, "ray does not leave the polytope");
  return best;
}

// f(r) = ||(y + r theta) / a||_p - 1 is convex with f(0) < 0, so Newton from
// an upper bracket decreases monotonically onto the root.
double lp_exit(const LpBallSpec& s, double radius_bound, Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) {
  const Small y = (p - s.center).cwiseQuotient(s.semi_axes);
  const Small d = theta.cwiseQuotient(s.semi_axes);
  const double tn = theta.norm();
  double lo = 0.0;
  double hi = ((p - s.center).norm() + radius_bound) / tn * (1.0 + 1e-12);
  double r = hi;
  if (s.p == std::floor(s.p) && static_cast<int>(s.p) % 2 == 0 && s.p <= 16.0) {
    // Even p: sum (y_i + r d_i)^p is a polynomial P(r); Newton on the convex
    // P^{1/p} - 1 with Horner evaluations.
    const int deg = static_cast<int>(s.p);
    std::array<double, 17> c{};
    std::array<double, 17> binom{}, ypow{};
    binom[0] = 1.0;
    for (int k = 0; k < deg; ++k) binom[k + 1] = binom[k] * (deg - k) / (k + 1);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      ypow[0] = 1.0;
      for (int k = 1; k <= deg; ++k) ypow[k] = ypow[k - 1] * y[i];
      double dk = 1.0;
      for (int k = 0; k <= deg; ++k) {
        c[k] += binom[k] * ypow[deg - k] * dk;
        dk *= d[i];
      }
    }
    const double inv = 1.0 / s.p;
    auto root = [deg, inv](double v) { return deg == 4 ? std::sqrt(std::sqrt(v)) : deg == 2 ? std::sqrt(v) : std::pow(v, inv); };
    for (int it = 0; it < 200; ++it) {
      double val = c[deg], der = 0.0;
      for (int k = deg - 1; k >= 0; --k) {
        der = der * r + val;
        val = val * r + c[k];
      }
      const double nu = root(val);
      const double f = nu - 1.0;
      if (f == 0.0) return r;
      if (f < 0.0) lo = std::max(lo, r); else hi = std::min(hi, r);
      const double df = nu * der / (s.p * val);
      double next = (df > 0.0) ? r - f / df : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 4e-16 * r || hi - lo <= 4e-16 * hi) return next;
      r = next;
    }
    return r;
  }
  for (int it = 0; it < 200; ++it) {
    const Small u = y + r * d;
    const double nu = lp_norm(u, s.p);
    const double f = nu - 1.0;
    if (f == 0.0) return r;
    if (f < 0.0) lo = std::max(lo, r); else hi = std::min(hi, r);
    double df = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] == 0.0) continue;
      df += std::copysign(power(std::abs(u[i]) / nu, s.p - 1.0), u[i]) * d[i];
    }
    double next = (df > 0.0) ? r - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 4e-16 * r || hi - lo <= 4e-16 * hi) return next;
    r = next;
  }
  return r;
}

// Bracketed root of gauge(p + r theta) = 1 on [0, hi] by the Illinois
// variant of regula falsi.
double bracket_exit(const Body::Impl& body, Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) {
  auto f = [&](double r) { return body.gauge(p + r * theta) - 1.0; };
  double lo = 0.0, hi = 2.0 * body.max_r / theta.norm();
  double flo = f(lo), fhi = f(hi);
  require(flo < 0.0, ErrorCode::PointNotInterior, "ray origin is not interior");
  require(fhi >= 0.0, ErrorCode::NonStarShaped, "ray exit not bracketed");
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > 2e-16 * hi; ++it) {
    double r = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
    const double fr = f(r);
    if (fr == 0.0) return r;
    if (fr < 0.0) {
      lo = r;
      flo = fr;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = r;
      fhi = fr;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

double lp_radius_bound(const LpBallSpec& s) {
  const double amax = s.semi_axes.maxCoeff();
  if (s.p <= 2.0) return amax;
  const double n = static_cast<double>(s.semi_axes.size());
  return std::min(s.semi_axes.norm(), std::pow(n, 0.5 - 1.0 / s.p) * amax);
}

}  // namespace

double Body::Impl::ray_exit(Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) const {
  switch (family) {
    case BodyFamily::Ellipsoid: return ellipsoid_exit(ell, p, theta);
    case BodyFamily::Polytope: return polytope_exit(*poly, p, theta);
    case BodyFamily::LpBall: return lp_exit(lp, lp_bound, p, theta);
    case BodyFamily::Shifted: return a->ray_exit(Small(p - shift), theta);
    case BodyFamily::RadialSum:
      if (p.squaredNorm() == 0.0) return alpha * a->ray_exit(p, theta) + beta * b->ray_exit(p, theta);
      return bracket_exit(*this, p, theta);
  }
  return 0.0;
}

double Body::Impl::gauge(const Vec& x) const {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  switch (family) {
    case BodyFamily::Ellipsoid:
      if (centered) return std::sqrt(std::max(0.0, x.dot(ell.shape * x)));
      break;
    case BodyFamily::LpBall:
      if (centered) return lp_norm(x.cwiseQuotient(lp.semi_axes), lp.p);
      break;
    case BodyFamily::Polytope:
      return std::max(0.0, (poly->normals * x).cwiseQuotient(poly->offsets).maxCoeff());
    default: break;
  }
  const Vec u = x / r;
  return r / ray_exit(Vec::Zero(n), u);
}

namespace {

double radial_at(const Body::Impl& b, const Vec& theta) { return b.ray_exit(Vec::Zero(b.n), theta); }

Vec numeric_gauge_gradient(const Body::Impl& b, const Vec& x) {
  const double h = 1e-6 * std::max(x.norm(), 1e-3 * b.max_r);
  Vec g(b.n);
  Vec y = x;
  for (int i = 0; i < b.n; ++i) {
    y[i] = x[i] + h;
    const double fp = b.gauge(y);
    y[i] = x[i] - h;
    const double fm = b.gauge(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Local descent of rho on the sphere from `theta`: 50 projected-gradient
// steps with step halving.
double descend(const Body::Impl& b, Vec theta, double value) {
  double tau = 0.2;
  for (int step = 0; step < 50; ++step) {
    const double g = b.gauge(theta);
    Vec grad = -numeric_gauge_gradient(b, theta) / (g * g);
    grad -= grad.dot(theta) * theta;
    const double gn = grad.norm();
    if (gn <= 1e-14 * value) break;
    const Vec dir = -grad / gn;
    bool moved = false;
    for (int half = 0; half < 40; ++half, tau *= 0.5) {
      Vec cand = std::cos(tau) * theta + std::sin(tau) * dir;
      cand.normalize();
      const double rv = radial_at(b, cand);
      if (rv < value) {
        theta = cand;
        value = rv;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    tau = std::min(0.5, 2.0 * tau);
  }
  return value;
}

double exact_min_radial(const Body::Impl& b) {
  if (b.family == BodyFamily::Polytope) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < b.poly->halfspaces(); ++i)
      best = std::min(best, b.poly->offsets[i] / b.poly->normals.row(i).norm());
    return best;
  }
  if (b.family == BodyFamily::Ellipsoid && b.centered) {
    Eigen::SelfAdjointEigenSolver<Mat> es(b.ell.shape, Eigen::EigenvaluesOnly);
    return 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
  }
  if (b.family == BodyFamily::LpBall && b.centered && b.lp.p >= 2.0) return b.lp.semi_axes.minCoeff();
  return std::numeric_limits<double>::quiet_NaN();
}

double numeric_min_radial(const Body::Impl& b, int degree) {
  const SphereRule& rule = detail::cached_sphere_rule(b.n, degree);
  std::vector<std::pair<double, Eigen::Index>> vals(rule.size());
  for (Eigen::Index k = 0; k < rule.size(); ++k) vals[k] = {radial_at(b, rule.nodes.col(k)), k};
  const std::size_t seeds = std::min<std::size_t>(8, vals.size());
  std::partial_sort(vals.begin(), vals.begin() + seeds, vals.end());
  double best = vals[0].first;
  for (std::size_t s = 0; s < seeds; ++s)
    best = std::min(best, descend(b, rule.nodes.col(vals[s].second), vals[s].first));
  return best;
}

double min_radial_impl(const Body::Impl& b, int degree) {
  const double exact = exact_min_radial(b);
  if (!std::isnan(exact)) return exact;
  return numeric_min_radial(b, degree);
}

int default_min_degree(int n) { return n <= 4 ? 10 : (n <= 6 ? 6 : 4); }

double max_radial_impl(const Body::Impl& b) {
  switch (b.family) {
    case BodyFamily::Ellipsoid: {
      Eigen::SelfAdjointEigenSolver<Mat> es(b.ell.shape, Eigen::EigenvaluesOnly);
      return b.ell.center.norm() + 1.0 / std::sqrt(es.eigenvalues().minCoeff());
    }
    case BodyFamily::LpBall: return b.lp.center.norm() + lp_radius_bound(b.lp);
    case BodyFamily::Polytope: {
      double best = 0.0;
      for (const auto& v : b.poly->vertices) best = std::max(best, v.norm());
      return best;
    }
    case BodyFamily::RadialSum: return b.alpha * b.a->max_r + b.beta * b.b->max_r;
    case BodyFamily::Shifted: return b.shift.norm() + b.a->max_r;
  }
  return 0.0;
}

std::shared_ptr<Body::Impl> finish(std::shared_ptr<Body::Impl> impl) {
  impl->max_r = max_radial_impl(*impl);
  impl->min_r = min_radial_impl(*impl, default_min_degree(impl->n));
  return impl;
}

void check_vec(const Vec& v, int n, const char* what) {
  require(v.size() == n, ErrorCode::InvalidSpec, std::string(what) + ": wrong length");
  require(v.allFinite(), ErrorCode::InvalidSpec, std::string(what) + ": non-finite entry");
}

}  // namespace

Body Body::ellipsoid(const Mat& shape, const Vec& center) {
  const int n = static_cast<int>(shape.rows());
  check_dim(n);
  require(shape.cols() == n && shape.allFinite(), ErrorCode::InvalidSpec, "ellipsoid: shape must be a finite square matrix");
  check_vec(center, n, "ellipsoid center");
  require((shape - shape.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * shape.cwiseAbs().maxCoeff(),
          ErrorCode::InvalidSpec, "ellipsoid: shape must be symmetric");
  const Mat sym = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() > 0.0, ErrorCode::InvalidSpec, "ellipsoid: shape must be positive definite");
  require(center.dot(sym * center) < 1.0, ErrorCode::OriginNotInterior, "ellipsoid: origin is not interior");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->family = BodyFamily::Ellipsoid;
  impl->ell = {sym, center};
  impl->centered = center.squaredNorm() == 0.0;
  return Body(finish(impl));
}

Body Body::lp_ball(double p, const Vec& semi_axes, const Vec& center) {
  const int n = static_cast<int>(semi_axes.size());
  check_dim(n);
  require(std::isfinite(p) && p >= 1.0, ErrorCode::InvalidSpec, "lp_ball: p must be finite and >= 1");
  check_vec(semi_axes, n, "lp_ball semi_axes");
  check_vec(center, n, "lp_ball center");
  require((semi_axes.array() > 0.0).all(), ErrorCode::InvalidSpec, "lp_ball: semi_axes must be positive");
  require(lp_norm(center.cwiseQuotient(semi_axes), p) < 1.0, ErrorCode::OriginNotInterior, "lp_ball: origin is not interior");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->family = BodyFamily::LpBall;
  impl->lp = {p, semi_axes, center};
  impl->lp_bound = lp_radius_bound(impl->lp);
  impl->centered = center.squaredNorm() == 0.0;
  return Body(finish(impl));
}

Body Body::polytope(const Mat& normals, const Vec& offsets) {
  const int n = static_cast<int>(normals.cols());
  check_dim(n);
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->family = BodyFamily::Polytope;
  impl->poly = std::make_shared<const PolytopeGeometry>(build_polytope_geometry(normals, offsets));
  return Body(finish(impl));
}

Body Body::ball(int n, double radius) {
  check_dim(n);
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidSpec, "ball: radius must be positive");
  return ellipsoid(Mat::Identity(n, n) / (radius * radius), Vec::Zero(n));
}

Body Body::cube(int n, double half_width) {
  check_dim(n);
  Mat a(2 * n, n);
  a << Mat::Identity(n, n), -Mat::Identity(n, n);
  return polytope(a, Vec::Constant(2 * n, half_width));
}

Body Body::from_spec(const BodySpec& spec) {
  const BodySpec flat = flatten(spec);
  if (const auto* e = std::get_if<EllipsoidSpec>(&flat.kind)) return ellipsoid(e->shape, e->center);
  if (const auto* l = std::get_if<LpBallSpec>(&flat.kind)) return lp_ball(l->p, l->semi_axes, l->center);
  const auto& p = std::get<PolytopeSpec>(flat.kind);
  return polytope(p.normals, p.offsets);
}

int Body::dim() const { return impl_->n; }
BodyFamily Body::family() const { return impl_->family; }

double Body::gauge(const Vec& x) const {
  require(x.size() == impl_->n, ErrorCode::InvalidSpec, "gauge: dimension mismatch");
  return impl_->gauge(x);
}

double Body::radial(const Direction& theta) const {
  require(theta.dim() == impl_->n, ErrorCode::InvalidSpec, "radial: dimension mismatch");
  return radial_at(*impl_, theta.vec());
}

double Body::radial_from_point(const Vec& p, const Direction& theta) const {
  require(p.size() == impl_->n && theta.dim() == impl_->n, ErrorCode::InvalidSpec, "radial_from_point: dimension mismatch");
  require(impl_->gauge(p) < 1.0, ErrorCode::PointNotInterior, "radial_from_point: point is not interior");
  return impl_->ray_exit(p, theta.vec());
}

double Body::ray_exit(Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) const { return impl_->ray_exit(p, theta); }

Vec Body::gauge_gradient(const Vec& x) const { return numeric_gauge_gradient(*impl_, x); }

double Body::min_radial() const { return impl_->min_r; }
double Body::max_radial() const { return impl_->max_r; }

const EllipsoidSpec* Body::as_ellipsoid() const {
  return impl_->family == BodyFamily::Ellipsoid ? &impl_->ell : nullptr;
}

const PolytopeGeometry* Body::as_polytope() const {
  return impl_->family == BodyFamily::Polytope ? impl_->poly.get() : nullptr;
}

BodySpec Body::spec() const {
  switch (impl_->family) {
    case BodyFamily::Ellipsoid: return {impl_->ell};
    case BodyFamily::LpBall: return {impl_->lp};
    case BodyFamily::Polytope: return {PolytopeSpec{impl_->poly->normals, impl_->poly->offsets}};
    default: fail(ErrorCode::InvalidSpec, "derived bodies have no spec");
  }
}

Body shifted(const Body& body, const Vec& c) {
  const Body::Impl& src = *body.impl_;
  require(c.size() == src.n && c.allFinite(), ErrorCode::InvalidSpec, "shift: dimension mismatch");
  switch (src.family) {
    case BodyFamily::Ellipsoid: return Body::ellipsoid(src.ell.shape, src.ell.center + c);
    case BodyFamily::LpBall: return Body::lp_ball(src.lp.p, src.lp.semi_axes, src.lp.center + c);
    case BodyFamily::Polytope: {
      const Vec offsets = src.poly->offsets + src.poly->normals * c;
      require((offsets.array() > 0.0).all(), ErrorCode::OriginNotInterior, "shift: origin leaves the polytope");
      auto geo = std::make_shared<PolytopeGeometry>(*src.poly);
      geo->offsets = offsets;
      for (auto& v : geo->vertices) v += c;
      auto impl = std::make_shared<Body::Impl>();
      impl->n = src.n;
      impl->family = BodyFamily::Polytope;
      impl->poly = std::move(geo);
      return Body(finish(impl));
    }
    default: break;
  }
  auto impl = std::make_shared<Body::Impl>();
  impl->n = src.n;
  impl->family = BodyFamily::Shifted;
  if (src.family == BodyFamily::Shifted) {
    impl->a = src.a;
    impl->shift = src.shift + c;
  } else {
    impl->a = body.impl_;
    impl->shift = c;
  }
  require(impl->a->gauge(-impl->shift) < 1.0, ErrorCode::OriginNotInterior, "shift: origin leaves the body");
  return Body(finish(impl));
}

Body translate(const Body& body, const Vec& v) {
  require(v.size() == body.dim() && v.allFinite(), ErrorCode::InvalidSpec, "translate: dimension mismatch");
  require(body.gauge(v) < 1.0, ErrorCode::OriginNotInterior, "translate: shift vector is not interior");
  return shifted(body, -v);
}

Body radial_sum(const Body& k, const Body& l, double alpha, double beta) {
  require(k.dim() == l.dim(), ErrorCode::InvalidSpec, "radial_sum: dimension mismatch");
  require(std::isfinite(alpha) && std::isfinite(beta) && alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0,
          ErrorCode::InvalidSpec, "radial_sum: coefficients must be nonnegative and not both zero");
  auto impl = std::make_shared<Body::Impl>();
  impl->n = k.dim();
  impl->family = BodyFamily::RadialSum;
  impl->a = k.impl_;
  impl->b = l.impl_;
  impl->alpha = alpha;
  impl->beta = beta;
  return Body(finish(impl));
}

double min_radial(const Body& body, int degree) {
  require(degree >= 2, ErrorCode::OrderOutOfRange, "min_radial: degree must be >= 2");
  const double exact = exact_min_radial(*body.impl_);
  if (!std::isnan(exact)) return exact;
  return numeric_min_radial(*body.impl_, degree);
}

}  // namespace polyint
