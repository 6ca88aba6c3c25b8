#include "polyint/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "polyint/error.hpp"
#include "polyint/parallel.hpp"
#include "polyint/quadrature.hpp"

namespace polyint {

namespace {

// Monomial coefficients in t of sum_k c_k T_k(alpha t + beta).
std::vector<double> chebyshev_to_monomial(const Vec& c, double alpha, double beta) {
  const int deg = static_cast<int>(c.size()) - 1;
  // Horner in x on the linear polynomial x = alpha t + beta, with T_k
  // expanded through the three-term recurrence in x first.
  std::vector<std::vector<double>> t(deg + 1);
  t[0] = {1.0};
  if (deg >= 1) t[1] = {0.0, 1.0};
  for (int k = 2; k <= deg; ++k) {
    t[k].assign(k + 1, 0.0);
    for (int j = 0; j < k; ++j) t[k][j + 1] += 2.0 * t[k - 1][j];
    for (int j = 0; j < k - 1; ++j) t[k][j] -= t[k - 2][j];
  }
  std::vector<double> in_x(deg + 1, 0.0);
  for (int k = 0; k <= deg; ++k)
    for (int j = 0; j <= k; ++j) in_x[j] += c[k] * t[k][j];

  std::vector<double> out(deg + 1, 0.0);
  for (int j = deg; j >= 0; --j) {
    // out = out * (alpha t + beta) + in_x[j]
    for (int i = deg; i >= 1; --i) out[i] = out[i] * beta + out[i - 1] * alpha;
    out[0] = out[0] * beta + in_x[j];
  }
  return out;
}

double rms(const Vec& v) { return v.size() == 0 ? 0.0 : v.norm() / std::sqrt(static_cast<double>(v.size())); }

void check_config(const DetectionConfig& c) {
  require(c.max_degree >= 0 && c.max_degree < c.grid_size, ErrorCode::DegenerateGrid,
          "max fit degree must be below the grid size");
  require(c.threshold > 0.0, ErrorCode::InvalidSpec, "residual threshold must be positive");
  require(c.directions >= 1, ErrorCode::OrderOutOfRange, "need at least one direction");
}

}  // namespace

PolynomialFitReport fit_polynomial(const SectionFunctionSamples& s, int degree) {
  const auto count = static_cast<int>(s.t.size());
  require(static_cast<int>(s.values.size()) == count, ErrorCode::DegenerateGrid, "samples and grid differ in size");
  require(degree >= 0 && degree < count, ErrorCode::DegenerateGrid, "fit degree must be below the sample count");
  require(s.hi > s.lo, ErrorCode::DegenerateGrid, "sample interval is empty");

  const double alpha = 2.0 / (s.hi - s.lo);
  const double beta = -(s.hi + s.lo) / (s.hi - s.lo);
  Mat v(count, degree + 1);
  Vec y(count);
  for (int i = 0; i < count; ++i) {
    const double x = alpha * s.t[i] + beta;
    v(i, 0) = 1.0;
    if (degree >= 1) v(i, 1) = x;
    for (int k = 2; k <= degree; ++k) v(i, k) = 2.0 * x * v(i, k - 1) - v(i, k - 2);
    y[i] = s.values[i];
  }
  const Vec c = v.colPivHouseholderQr().solve(y);
  const double scale = rms(y);
  const double misfit = rms(v * c - y);

  PolynomialFitReport r;
  r.xi = s.xi.vec();
  r.degree = degree;
  r.coefficients = chebyshev_to_monomial(c, alpha, beta);
  r.residual = scale > 0.0 ? misfit / scale : misfit;
  return r;
}

PolynomialFitReport detect_direction(const Body& body, int m, const Direction& xi, const DetectionConfig& config) {
  check_config(config);
  const SectionFunctionSamples s = section_function(body, m, xi, config.grid_size, config.margin, config.section, 1);
  PolynomialFitReport best;
  for (int d = 0; d <= config.max_degree; ++d) {
    best = fit_polynomial(s, d);
    if (best.residual <= config.threshold) {
      best.polynomial = true;
      return best;
    }
  }
  return best;
}

std::vector<Direction> direction_ensemble(int n, int count, std::uint64_t seed) {
  std::vector<Direction> out;
  for (int i = 0; i < n; ++i) out.push_back(Direction::axis(n, i));
  out.push_back(Direction::normalized(Vec::Ones(n)));
  for (int k = 0; static_cast<int>(out.size()) < count; ++k)
    out.push_back(Direction::normalized(haar_frame(n, 1, seed, k).col(0)));
  return out;
}

EllipsoidFit ellipsoid_fit(const Body& body, int degree) {
  const int n = body.dim();
  const SphereRule& rule = detail::cached_sphere_rule(n, degree);
  const int unknowns = n * (n + 1) / 2;
  Mat a(rule.size(), unknowns);
  Vec b(rule.size());
  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const Vec theta = rule.nodes.col(k);
    const double w = std::sqrt(rule.weights[k]);
    int col = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(k, col++) = w * theta[i] * theta[j] * (i == j ? 1.0 : 2.0);
    const double g = body.gauge(theta);
    b[k] = w * g * g;
  }
  const Vec x = a.colPivHouseholderQr().solve(b);

  EllipsoidFit fit;
  fit.q.resize(n, n);
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) fit.q(i, j) = fit.q(j, i) = x[col++];
  fit.residual = (a * x - b).norm() / b.norm();
  fit.positive_definite = Eigen::SelfAdjointEigenSolver<Mat>(fit.q).eigenvalues().minCoeff() > 0.0;
  return fit;
}

ClassificationReport detect_body(const Body& body, int m, const DetectionConfig& config) {
  check_config(config);
  require(m >= 1 && m <= body.dim() - 1, ErrorCode::OrderOutOfRange, "m must satisfy 1 <= m <= n-1");
  const std::vector<Direction> dirs = direction_ensemble(body.dim(), config.directions, config.seed);

  ClassificationReport report;
  report.m = m;
  report.per_direction.resize(dirs.size());
  parallel_for(dirs.size(), config.threads, [&](std::size_t i) {
    report.per_direction[i] = detect_direction(body, m, dirs[i], config);
  });
  report.polynomial = std::all_of(report.per_direction.begin(), report.per_direction.end(),
                                  [](const PolynomialFitReport& r) { return r.polynomial; });
  if (report.polynomial)
    for (const auto& r : report.per_direction) report.degree_bound = std::max(report.degree_bound, r.degree);
  report.ellipsoid = ellipsoid_fit(body);
  return report;
}

std::vector<CorpusEntry> detector_corpus(int n, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  out.push_back({"ball", Body::ball(n), true});

  std::mt19937_64 rng(detail::splitmix64(seed));
  std::uniform_real_distribution<double> axis(0.6, 1.6);
  for (int e = 0; e < 3; ++e) {
    Vec semi(n);
    for (int i = 0; i < n; ++i) semi[i] = axis(rng);
    const Mat shape = semi.cwiseInverse().cwiseAbs2().asDiagonal();
    out.push_back({"ellipsoid" + std::to_string(e + 1), Body::ellipsoid(shape, Vec::Zero(n)), true});
  }

  out.push_back({"lp4", Body::lp_ball(4.0, Vec::Ones(n), Vec::Zero(n)), false});
  out.push_back({"cube", Body::cube(n), false});

  // Twelve random facets; redraw until the polytope is bounded.
  std::uniform_real_distribution<double> offset(0.7, 1.3);
  for (std::uint64_t attempt = 0;; ++attempt) {
    Mat normals(12, n);
    Vec offsets(12);
    for (int f = 0; f < 12; ++f) {
      normals.row(f) = haar_frame(n, 1, seed + 7919 * (attempt + 1), f).col(0).transpose();
      offsets[f] = offset(rng);
    }
    try {
      out.push_back({"polytope", Body::polytope(normals, offsets), false});
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidSpec || attempt > 100) throw;
    }
  }
  return out;
}

}  // namespace polyint
