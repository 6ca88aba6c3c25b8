#include "polyint/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

#include "polyint/error.hpp"
#include "polyint/specialfn.hpp"

namespace polyint {

namespace {

// Monic Jacobi recurrence: p_{j+1} = (x - a_j) p_j - b_j p_{j-1}.
double jacobi_a(int j, double al, double be) {
  if (j == 0) return (be - al) / (al + be + 2.0);
  const double s = 2.0 * j + al + be;
  return (be * be - al * al) / (s * (s + 2.0));
}

double jacobi_b(int j, double al, double be) {
  if (j == 1) {
    const double s = 2.0 + al + be;
    return 4.0 * (1.0 + al) * (1.0 + be) / (s * s * (s + 1.0));
  }
  const double s = 2.0 * j + al + be;
  return 4.0 * j * (j + al) * (j + be) * (j + al + be) / (s * s * (s + 1.0) * (s - 1.0));
}

IntervalRule build_gauss_jacobi(int order, double al, double be) {
  const double log_mu0 = (al + be + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) +
                         std::lgamma(be + 1.0) - std::lgamma(al + be + 2.0);
  const double mu0 = std::exp(log_mu0);

  std::vector<double> a(order), sb(order + 1, 0.0);
  for (int j = 0; j < order; ++j) a[j] = jacobi_a(j, al, be);
  for (int j = 1; j <= order; ++j) sb[j] = std::sqrt(jacobi_b(j, al, be));

  Vec diag(order);
  Vec sub(std::max(order - 1, 0));
  for (int j = 0; j < order; ++j) diag[j] = a[j];
  for (int j = 1; j < order; ++j) sub[j - 1] = sb[j];

  std::vector<double> x(order);
  if (order == 1) {
    x[0] = a[0];
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < order; ++i) x[i] = es.eigenvalues()[i];
  }

  // Orthonormal recurrence; returns p_order(x), p'_order(x), sum_{j<order} p_j^2.
  const double p0 = 1.0 / std::sqrt(mu0);
  auto eval = [&](double t, double& p, double& dp, double& sumsq) {
    double pm1 = 0.0, dpm1 = 0.0;
    double pj = p0, dpj = 0.0;
    sumsq = 0.0;
    for (int j = 0; j < order; ++j) {
      sumsq += pj * pj;
      const double pn = ((t - a[j]) * pj - sb[j] * pm1) / sb[j + 1];
      const double dpn = ((t - a[j]) * dpj + pj - sb[j] * dpm1) / sb[j + 1];
      pm1 = pj;
      dpm1 = dpj;
      pj = pn;
      dpj = dpn;
    }
    p = pj;
    dp = dpj;
  };

  IntervalRule rule;
  rule.alpha = al;
  rule.beta = be;
  rule.exact_degree = 2 * order - 1;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double t = x[i];
    double p = 0, dp = 0, sumsq = 0;
    for (int it = 0; it < 3; ++it) {
      eval(t, p, dp, sumsq);
      if (dp == 0.0) break;
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    eval(t, p, dp, sumsq);
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / sumsq;
  }

  if (al == be) {
    for (int i = 0; i < order / 2; ++i) {
      const int j = order - 1 - i;
      const double xs = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double ws = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -xs;
      rule.nodes[j] = xs;
      rule.weights[i] = rule.weights[j] = ws;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  }
  return rule;
}

SphereRule build_sphere_rule(int n, int degree) {
  SphereRule rule;
  rule.dim = n;
  rule.exact_degree = degree;
  if (n == 1) {
    rule.nodes.resize(1, 2);
    rule.nodes << 1.0, -1.0;
    rule.weights = Vec::Ones(2);
    return rule;
  }
  if (n == 2) {
    const int count = degree + 1;
    rule.nodes.resize(2, count);
    rule.weights = Vec::Constant(count, 2.0 * std::numbers::pi / count);
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / count;
      rule.nodes(0, j) = std::cos(phi);
      rule.nodes(1, j) = std::sin(phi);
    }
    return rule;
  }
  const double expo = 0.5 * (n - 3);
  const IntervalRule& polar = detail::cached_gauss_jacobi(degree / 2 + 1, expo, expo);
  const SphereRule& lower = detail::cached_sphere_rule(n - 1, degree);
  const auto nz = static_cast<Eigen::Index>(polar.size());
  const Eigen::Index nl = lower.size();
  rule.nodes.resize(n, nz * nl);
  rule.weights.resize(nz * nl);
  for (Eigen::Index i = 0; i < nz; ++i) {
    const double z = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    for (Eigen::Index j = 0; j < nl; ++j) {
      const Eigen::Index k = i * nl + j;
      rule.nodes.col(k).head(n - 1) = s * lower.nodes.col(j);
      rule.nodes(n - 1, k) = z;
      rule.weights[k] = polar.weights[i] * lower.weights[j];
    }
  }
  return rule;
}

}  // namespace

double IntervalRule::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // The weight (1-x)^alpha (1+x)^beta picks up half^(alpha+beta) under the map.
  const double scale = std::pow(half, 1.0 + alpha + beta);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mid + half * nodes[i]);
  return scale * acc;
}

IntervalRule gauss_legendre(int order) {
  require(order >= 1 && order <= 512, ErrorCode::OrderOutOfRange,
          "Gauss-Legendre order must lie in [1, 512]");
  return detail::cached_gauss_jacobi(order, 0.0, 0.0);
}

IntervalRule gauss_jacobi(int order, double alpha, double beta) {
  require(order >= 1 && order <= 1024, ErrorCode::OrderOutOfRange,
          "Gauss-Jacobi order must lie in [1, 1024]");
  require(alpha > -1.0 && beta > -1.0, ErrorCode::OrderOutOfRange,
          "Gauss-Jacobi exponents must exceed -1");
  return detail::cached_gauss_jacobi(order, alpha, beta);
}

SphereRule sphere_rule(int n, int degree) {
  require(n >= 2 && n <= 8, ErrorCode::DimensionOutOfRange, "sphere_rule needs 2 <= n <= 8");
  require(degree >= 0, ErrorCode::OrderOutOfRange, "degree must be >= 0");
  return detail::cached_sphere_rule(n, degree);
}

SubsphereRule subsphere_rule(const Direction& xi, int degree) {
  const int n = xi.dim();
  require(n >= 2 && n <= 8, ErrorCode::DimensionOutOfRange, "subsphere_rule needs 2 <= n <= 8");
  require(degree >= 0, ErrorCode::OrderOutOfRange, "degree must be >= 0");
  Mat basis = complement_basis(xi);
  const SphereRule& inner = detail::cached_sphere_rule(n - 1, degree);
  Mat nodes = basis * inner.nodes;
  return SubsphereRule{xi, std::move(basis), std::move(nodes), inner.weights, degree};
}

Mat haar_frame(int ambient, int dim, std::uint64_t seed, std::uint64_t index) {
  require(ambient >= 1 && dim >= 1 && dim <= ambient, ErrorCode::DimensionOutOfRange,
          "haar_frame needs 1 <= dim <= ambient");
  std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(index + 0x9e3779b97f4a7c15ULL)));
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(ambient, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < ambient; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(ambient, dim);
  const Mat r = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
  // Sign convention diag(R) > 0 makes the frame Haar distributed.
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

std::vector<Mat> haar_frames(const GrassmannSampler& s) {
  require(s.ambient >= 2 && s.dim >= 1 && s.dim <= s.ambient - 1, ErrorCode::DimensionOutOfRange,
          "haar_frames needs 1 <= i <= n - 1");
  require(s.samples >= 0, ErrorCode::OrderOutOfRange, "sample count must be >= 0");
  std::vector<Mat> frames;
  frames.reserve(static_cast<std::size_t>(s.samples));
  for (int k = 0; k < s.samples; ++k) frames.push_back(haar_frame(s.ambient, s.dim, s.seed, k));
  return frames;
}

SplitCheck grassmann_sphere_split_check(const Direction& xi, int m,
                                        const std::function<double(const Vec&)>& f, int samples,
                                        std::uint64_t seed, int degree) {
  const int n = xi.dim();
  require(n >= 3 && n <= 8, ErrorCode::DimensionOutOfRange, "split check needs 3 <= n <= 8");
  require(m >= 1 && m <= n - 1, ErrorCode::OrderOutOfRange, "split check needs 1 <= m <= n - 1");
  require(samples >= 2, ErrorCode::OrderOutOfRange, "split check needs at least 2 samples");

  const SubsphereRule sub = subsphere_rule(xi, degree);
  double rhs = 0.0;
  for (Eigen::Index k = 0; k < sub.size(); ++k) rhs += sub.weights[k] * f(sub.nodes.col(k));
  rhs *= m * kappa(m) / ((n - 1) * kappa(n - 1));

  const SphereRule& small = detail::cached_sphere_rule(m, degree);
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Mat frame = sub.basis * haar_frame(n - 1, m, seed, s);
    const Mat pts = frame * small.nodes;
    double v = 0.0;
    for (Eigen::Index k = 0; k < small.size(); ++k) v += small.weights[k] * f(pts.col(k));
    // Welford update.
    const double delta = v - mean;
    mean += delta / (s + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / (samples - 1);
  return {mean, rhs, std::sqrt(var / samples)};
}

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const IntervalRule& cached_gauss_jacobi(int order, double alpha, double beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<IntervalRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{order, alpha, beta}];
  if (!slot) slot = std::make_unique<IntervalRule>(build_gauss_jacobi(order, alpha, beta));
  return *slot;
}

const SphereRule& cached_sphere_rule(int n, int degree) {
  require(n >= 1 && n <= 9, ErrorCode::DimensionOutOfRange, "sphere rule dimension out of range");
  static std::recursive_mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SphereRule>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto& slot = cache[{n, degree}];
  if (!slot) slot = std::make_unique<SphereRule>(build_sphere_rule(n, degree));
  return *slot;
}

}  // namespace detail

}  // namespace polyint
