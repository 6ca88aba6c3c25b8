#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyint/detector.hpp"
#include "polyint/error.hpp"

using namespace polyint;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericFailure;
}

SectionFunctionSamples samples_of(double (*f)(double), double lo, double hi, int count) {
  SectionFunctionSamples s{Direction::axis(3, 0)};
  s.lo = lo;
  s.hi = hi;
  for (int i = count - 1; i >= 0; --i) {
    const double x = std::cos(std::numbers::pi * (i + 0.5) / count);
    s.t.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
    s.values.push_back(f(s.t.back()));
  }
  return s;
}

Body diag_ellipsoid(const Vec& semi) {
  return Body::ellipsoid(semi.cwiseInverse().cwiseAbs2().asDiagonal(), Vec::Zero(semi.size()));
}

}  // namespace

TEST_CASE("fit_polynomial on closed-form samples") {
  const auto cubic = samples_of([](double t) { return 2.0 - t + 0.5 * t * t * t; }, -0.7, 1.3, 40);
  const PolynomialFitReport r = fit_polynomial(cubic, 3);
  CHECK(r.residual <= 1e-12);
  REQUIRE(r.coefficients.size() == 4);
  CHECK(std::abs(r.coefficients[0] - 2.0) <= 1e-12);
  CHECK(std::abs(r.coefficients[1] + 1.0) <= 1e-12);
  CHECK(std::abs(r.coefficients[2]) <= 1e-12);
  CHECK(std::abs(r.coefficients[3] - 0.5) <= 1e-12);
  CHECK(fit_polynomial(cubic, 2).residual > 1e-3);

  const auto flat = samples_of([](double) { return 4.0; }, -1.0, 1.0, 16);
  const PolynomialFitReport c = fit_polynomial(flat, 0);
  REQUIRE(c.coefficients.size() == 1);
  CHECK(c.coefficients[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(c.residual <= 1e-15);

  // sqrt(1 - t^2) on the ball's sampled interval: the Chebyshev tail past
  // degree 16 is far above round-off.
  const auto root = samples_of([](double t) { return std::sqrt(1.0 - t * t); }, -0.999, 0.999, 64);
  CHECK(fit_polynomial(root, 16).residual > 1e-4);

  CHECK(code_of([&] { fit_polynomial(flat, 16); }) == ErrorCode::DegenerateGrid);
  CHECK(code_of([&] { fit_polynomial(flat, -1); }) == ErrorCode::DegenerateGrid);
}

TEST_CASE("direction ensemble") {
  const auto dirs = direction_ensemble(4, 10, 3);
  REQUIRE(dirs.size() == 10);
  for (int i = 0; i < 4; ++i) CHECK(dirs[i].vec() == Direction::axis(4, i).vec());
  CHECK((dirs[4].vec() - Vec::Constant(4, 0.5)).norm() <= 1e-15);
  const auto again = direction_ensemble(4, 10, 3);
  for (std::size_t i = 0; i < dirs.size(); ++i) CHECK(dirs[i].vec() == again[i].vec());
  CHECK(direction_ensemble(3, 1, 0).size() == 4);
}

TEST_CASE("detect_direction verdicts") {
  DetectionConfig cfg;
  const Body e = diag_ellipsoid((Vec(3) << 1.3, 1.0, 0.8).finished());
  const PolynomialFitReport axis = detect_direction(e, 2, Direction::axis(3, 2), cfg);
  CHECK(axis.polynomial);
  CHECK(axis.degree == 2);
  const double pi = std::numbers::pi;
  CHECK(std::abs(axis.coefficients[0] - pi * 1.3) <= 1e-9);
  CHECK(std::abs(axis.coefficients[1]) <= 1e-9);
  CHECK(std::abs(axis.coefficients[2] + pi * 1.3 / 0.64) <= 1e-9);

  const PolynomialFitReport oblique =
      detect_direction(e, 2, Direction::normalized((Vec(3) << 0.4, -0.7, 0.6).finished()), cfg);
  CHECK(oblique.polynomial);
  CHECK(oblique.degree == 2);
  CHECK(oblique.residual <= 1e-8);

  const PolynomialFitReport slab = detect_direction(Body::cube(3), 2, Direction::axis(3, 2), cfg);
  CHECK(slab.polynomial);
  CHECK(slab.degree == 0);
  CHECK(std::abs(slab.coefficients[0] - 4.0) <= 1e-10);

  const PolynomialFitReport odd = detect_direction(Body::ball(5), 3, Direction::axis(5, 0), cfg);
  CHECK_FALSE(odd.polynomial);
  CHECK(odd.degree == cfg.max_degree);
  CHECK(odd.residual > 1e-4);
}

TEST_CASE("detect_body on ellipsoids and the cube") {
  DetectionConfig cfg;
  cfg.directions = 12;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Body e = diag_ellipsoid((Vec(3) << 1.2, 0.9, 0.7).finished());
  const ClassificationReport er = detect_body(e, 2, cfg);
  CHECK(er.polynomial);
  CHECK(er.degree_bound == 2);
  CHECK(er.per_direction.size() == 12);
  CHECK(er.ellipsoid.residual <= 1e-10);

  // The image of the ellipsoid under a linear map is again an ellipsoid.
  Mat t(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * g(rng);
  const Mat tinv = t.inverse();
  const Mat shape = tinv.transpose() * e.as_ellipsoid()->shape * tinv;
  const ClassificationReport te = detect_body(Body::ellipsoid(0.5 * (shape + shape.transpose()), Vec::Zero(3)), 2, cfg);
  CHECK(te.polynomial == er.polynomial);
  CHECK(te.degree_bound == 2);

  const ClassificationReport cube = detect_body(Body::cube(3), 2, cfg);
  CHECK_FALSE(cube.polynomial);
  CHECK(cube.degree_bound == -1);
  for (int i = 0; i < 3; ++i) CHECK(cube.per_direction[i].polynomial);
  CHECK_FALSE(cube.per_direction[3].polynomial);  // the main diagonal

  cfg.threads = 1;
  const ClassificationReport serial = detect_body(Body::cube(3), 1, cfg);
  cfg.threads = 3;
  const ClassificationReport pooled = detect_body(Body::cube(3), 1, cfg);
  for (std::size_t i = 0; i < serial.per_direction.size(); ++i) {
    CHECK(serial.per_direction[i].residual == pooled.per_direction[i].residual);
    CHECK(serial.per_direction[i].coefficients == pooled.per_direction[i].coefficients);
  }

  CHECK(code_of([&] { detect_body(e, 3, cfg); }) == ErrorCode::OrderOutOfRange);
  cfg.max_degree = 64;
  CHECK(code_of([&] { detect_body(e, 2, cfg); }) == ErrorCode::DegenerateGrid);
}

TEST_CASE("ellipsoid_fit") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Mat a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = g(rng);
  a = a * a.transpose() + Mat::Identity(4, 4);
  const EllipsoidFit fit = ellipsoid_fit(Body::ellipsoid(a, Vec::Zero(4)));
  CHECK(fit.residual <= 1e-10);
  CHECK((fit.q - a).norm() <= 1e-10 * a.norm());
  CHECK(fit.positive_definite);

  const EllipsoidFit ball = ellipsoid_fit(Body::ball(3));
  CHECK((ball.q - Mat::Identity(3, 3)).norm() <= 1e-12);

  CHECK(ellipsoid_fit(Body::lp_ball(4.0, Vec::Ones(3), Vec::Zero(3))).residual > 1e-3);
  CHECK(ellipsoid_fit(Body::cube(3)).residual > 1e-3);
  // An off-center ellipsoid is not a quadratic form in the gauge.
  CHECK(ellipsoid_fit(Body::ellipsoid(Mat::Identity(3, 3), Vec::Constant(3, 0.2))).residual > 1e-3);
}

TEST_CASE("dichotomy on the three-dimensional corpus") {
  DetectionConfig cfg;
  cfg.directions = 10;
  const auto corpus = detector_corpus(3);
  REQUIRE(corpus.size() == 7);
  for (const CorpusEntry& c : corpus)
    for (int m = 1; m <= 2; ++m) {
      const ClassificationReport r = detect_body(c.body, m, cfg);
      CAPTURE(c.name);
      CAPTURE(m);
      CHECK(r.polynomial == (c.is_ellipsoid && m % 2 == 0));
      if (c.is_ellipsoid) CHECK(r.ellipsoid.residual <= 1e-8);
      else CHECK(r.ellipsoid.residual >= 1e-3);
    }
}
