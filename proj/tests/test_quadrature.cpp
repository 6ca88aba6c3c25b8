#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyint/error.hpp"
#include "polyint/quadrature.hpp"
#include "polyint/specialfn.hpp"

using namespace polyint;

namespace {

// Closed-form monomial moment on S^{n-1}: 2 prod Gamma((a_i+1)/2) / Gamma((|a|+n)/2),
// zero if any exponent is odd.
double sphere_monomial_moment(const std::vector<int>& a) {
  double log_num = 0.0;
  int total = 0;
  for (int e : a) {
    if (e % 2 != 0) return 0.0;
    log_num += std::lgamma(0.5 * (e + 1));
    total += e;
  }
  return 2.0 * std::exp(log_num - std::lgamma(0.5 * (total + static_cast<int>(a.size()))));
}

double integrate(const SphereRule& r, const std::function<double(const Vec&)>& f) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) acc += r.weights[k] * f(r.nodes.col(k));
  return acc;
}

Mat random_orthogonal(int n, std::uint64_t seed) { return haar_frame(n, n, seed, 0); }

}  // namespace

TEST_CASE("gauss_legendre small orders") {
  const auto r1 = gauss_legendre(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  // Two-point moment equations 2w = 2, 2 w a^2 = 2/3.
  const double a = std::sqrt((2.0 / 3.0) / 2.0);
  const auto r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-a).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(a).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.integrate([](double t) { return t * t; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r2.exact_degree == 3);
}

TEST_CASE("gauss_legendre weights, symmetry and exactness") {
  for (int order : {1, 3, 8, 17, 64, 200, 512}) {
    const auto r = gauss_legendre(order);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(std::abs(sum - 2.0) <= 1e-13);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r.nodes[i] == -r.nodes[r.size() - 1 - i]);
      CHECK(r.weights[i] > 0.0);
    }
    const int top = std::min(r.exact_degree, 60);
    for (int k = 0; k <= top; ++k) {
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      const double got = r.integrate([k](double t) { return std::pow(t, k); });
      CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("gauss_legendre rejects bad orders") {
  CHECK_THROWS_AS(gauss_legendre(0), Error);
  CHECK_THROWS_AS(gauss_legendre(513), Error);
  try {
    gauss_legendre(0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderOutOfRange);
  }
}

TEST_CASE("gauss_jacobi integrates (1+x)^k against Beta moments") {
  for (auto [al, be] : {std::pair{0.5, 0.5}, {-0.5, -0.5}, {0.0, -0.75}, {1.5, -0.3}, {0.0, 2.5}}) {
    const auto r = gauss_jacobi(12, al, be);
    for (int k = 0; k <= 23; ++k) {
      const double exact = std::exp((al + be + k + 1) * std::log(2.0) + std::lgamma(al + 1) +
                                    std::lgamma(be + k + 1) - std::lgamma(al + be + k + 2));
      const double got = r.integrate([k](double x) { return std::pow(1.0 + x, k); });
      CHECK(std::abs(got - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("sphere_rule totals") {
  CHECK(integrate(sphere_rule(3, 4), [](const Vec&) { return 1.0; }) ==
        doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(integrate(sphere_rule(2, 4), [](const Vec&) { return 1.0; }) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  // Symmetry oracle: \int theta_i^2 = |S^{n-1}| / n.
  const double pi = std::numbers::pi;
  CHECK(integrate(sphere_rule(4, 2), [](const Vec& t) { return t[0] * t[0]; }) ==
        doctest::Approx(pi * pi / 2.0).epsilon(1e-13));
  for (int n = 2; n <= 8; ++n) {
    const auto r = sphere_rule(n, 3);
    CHECK(std::abs(r.weights.sum() - sphere_area(n)) <= 1e-12 * sphere_area(n));
    for (Eigen::Index k = 0; k < r.size(); ++k) CHECK(std::abs(r.nodes.col(k).norm() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(sphere_rule(1, 4), Error);
  CHECK_THROWS_AS(sphere_rule(9, 4), Error);
}

TEST_CASE("sphere_rule integrates monomials exactly") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 6; ++n) {
    const int degree = n <= 4 ? 10 : 6;
    const auto r = sphere_rule(n, degree);
    // theta_1^{2a} closed form |S^{n-1}| (2a-1)!! / (n (n+2) ... (n+2a-2)).
    for (int a = 0; 2 * a <= degree; ++a) {
      double expect = sphere_area(n);
      for (int j = 0; j < a; ++j) expect *= (2.0 * j + 1.0) / (n + 2.0 * j);
      const double got = integrate(r, [a](const Vec& t) { return std::pow(t[0], 2 * a); });
      CHECK(std::abs(got - expect) <= 1e-10 * expect);
    }
    // Random mixed monomials of total degree <= degree.
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<int> e(n, 0);
      const int total = trial % (degree + 1);
      for (int s = 0; s < total; ++s) ++e[pick(rng)];
      const double expect = sphere_monomial_moment(e);
      const double got = integrate(r, [&](const Vec& t) {
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= std::pow(t[i], e[i]);
        return v;
      });
      CHECK(std::abs(got - expect) <= 1e-11 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("sphere_rule is rotation invariant on polynomials") {
  for (int n : {3, 4, 5}) {
    const int degree = 6;
    const auto r = sphere_rule(n, degree);
    const Mat q = random_orthogonal(n, 100 + n);
    Vec c = Vec::LinSpaced(n, 0.3, 1.1);
    auto f = [&](const Vec& t) {
      const double u = c.dot(t);
      return std::pow(u, 6) - 2.0 * u * u * t[0] + t[n - 1] * t[0] * u * u * u;
    };
    double sup = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k) sup = std::max(sup, std::abs(f(r.nodes.col(k))));
    const double plain = integrate(r, f);
    const double rotated = integrate(r, [&](const Vec& t) { return f(q * t); });
    CHECK(std::abs(plain - rotated) <= 1e-10 * sup);
  }
}

TEST_CASE("subsphere_rule") {
  const auto r3 = subsphere_rule(Direction::normalized(Vec::LinSpaced(3, 0.2, 0.9)), 8);
  CHECK(r3.weights.sum() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  for (Eigen::Index k = 0; k < r3.size(); ++k) CHECK(std::abs(r3.nodes.col(k).dot(r3.axis.vec())) < 1e-13);

  const auto r2 = subsphere_rule(Direction::axis(2, 0), 8);
  REQUIRE(r2.size() == 2);
  CHECK(r2.nodes(0, 0) == 0.0);
  CHECK(r2.nodes(1, 0) == 1.0);
  CHECK(r2.nodes(1, 1) == -1.0);
  CHECK(r2.weights[0] == 1.0);
  CHECK(r2.weights[1] == 1.0);

  Vec v(5);
  v << 0.3, -0.8, 0.1, 0.45, -0.2;
  const auto r5 = subsphere_rule(Direction::normalized(v), 6);
  CHECK(std::abs(r5.weights.sum() - sphere_area(4)) < 1e-12 * sphere_area(4));
  const Mat gram = r5.basis.transpose() * r5.basis;
  CHECK((gram - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  for (Eigen::Index k = 0; k < r5.size(); ++k) CHECK(std::abs(r5.nodes.col(k).dot(r5.axis.vec())) < 1e-13);
  // Deterministic frame.
  const auto again = subsphere_rule(Direction::normalized(v), 6);
  CHECK(again.basis == r5.basis);
}

TEST_CASE("haar_frames: orthonormal, deterministic, uniform") {
  const auto frames = haar_frames({5, 2, 50, 42});
  REQUIRE(frames.size() == 50);
  for (const auto& f : frames) CHECK((f.transpose() * f - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  const auto again = haar_frames({5, 2, 50, 42});
  for (std::size_t k = 0; k < frames.size(); ++k) CHECK(frames[k] == again[k]);
  // Prefix stability: frame k does not depend on the sample count.
  CHECK(haar_frames({5, 2, 10, 42})[7] == frames[7]);

  // n = 2, i = 1: mean <theta, e1>^2 = 1/2 with variance 1/8.
  const int count = 20000;
  const auto dirs = haar_frames({2, 1, count, 9});
  double mean = 0.0;
  for (const auto& d : dirs) mean += d(0, 0) * d(0, 0);
  mean /= count;
  CHECK(std::abs(mean - 0.5) <= 3.0 * std::sqrt(0.125 / count));
}

TEST_CASE("haar frame columns have second moments I/n") {
  const int n = 4, count = 8000;
  const auto frames = haar_frames({n, 2, count, 1234});
  Mat acc = Mat::Zero(n, n);
  for (const auto& f : frames) acc += f.col(1) * f.col(1).transpose();
  acc /= count;
  // Var(theta_i^2) = 2(n-1)/(n^2(n+2)); Var(theta_i theta_j) = 1/(n(n+2)).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double var = (i == j) ? 2.0 * (n - 1) / (n * n * (n + 2.0)) : 1.0 / (n * (n + 2.0));
      const double expect = (i == j) ? 1.0 / n : 0.0;
      CHECK(std::abs(acc(i, j) - expect) <= 4.0 * std::sqrt(var / count));
    }
  }
}

TEST_CASE("grassmann_sphere_split_check") {
  Vec v(5);
  v << 0.1, 0.7, -0.3, 0.2, 0.5;
  const Direction xi = Direction::normalized(v);
  for (int m = 1; m <= 3; ++m) {
    const auto c = grassmann_sphere_split_check(xi, m, [](const Vec&) { return 1.0; }, 200, 5);
    CHECK(c.lhs == doctest::Approx(m * kappa(m)).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(m * kappa(m)).epsilon(1e-12));
  }
  const Mat basis = complement_basis(xi);
  const Vec e = basis.col(1);
  const auto odd = grassmann_sphere_split_check(xi, 2, [&](const Vec& t) { return t.dot(e); }, 200, 5);
  CHECK(std::abs(odd.lhs) < 1e-12);
  CHECK(std::abs(odd.rhs) < 1e-12);

  for (int m = 1; m <= 3; ++m) {
    const auto sq = grassmann_sphere_split_check(
        xi, m, [&](const Vec& t) { return std::pow(t.dot(e), 2); }, 4000, 77);
    // Symmetry oracle: \int_{S^{n-2}} eta_1^2 = |S^{n-2}| / (n-1); scaled rhs.
    const double expect_rhs = m * kappa(m) / (4 * kappa(4)) * sphere_area(4) / 4.0;
    CHECK(sq.rhs == doctest::Approx(expect_rhs).epsilon(1e-12));
    CHECK(std::abs(sq.lhs - sq.rhs) <= 3.0 * sq.std_error);
  }
}
