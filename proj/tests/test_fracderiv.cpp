#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polyint/error.hpp"
#include "polyint/fracderiv.hpp"

using namespace polyint;

namespace {

ProfileFn exp_profile(double a, int terms = 12) {
  ProfileFn h;
  h.eval = [a](double t) { return std::exp(-a * t); };
  double c = 1.0;
  for (int k = 0; k < terms; ++k) {
    h.taylor.push_back(c);
    c *= -a / (k + 1);
  }
  return h;
}

// (1 - t)^3 on [0, 1]; its order-q derivative is 6 / Gamma(4 - q) by the Beta integral.
ProfileFn cubic_profile() {
  ProfileFn h;
  h.eval = [](double t) { return t < 1.0 ? std::pow(1.0 - t, 3) : 0.0; };
  h.taylor = {1.0, -3.0, 3.0, -1.0, 0.0, 0.0, 0.0};
  h.support = 1.0;
  return h;
}

double cubic_oracle(double q) { return 6.0 / std::tgamma(4.0 - q); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericFailure;
}

}  // namespace

TEST_CASE("exponential has unit derivatives of every order") {
  const ProfileFn h = exp_profile(1.0);
  for (double q : {-0.5, 0.5, 1.5}) CHECK(std::abs(frac_deriv(h, q) - 1.0) <= 1e-8);
  CHECK(std::abs(fractional_derivative(h, 3.0) - 1.0) <= 1e-14);
  CHECK(std::abs(fractional_derivative(h, 2.5) - 1.0) <= 1e-8);
}

TEST_CASE("scaled exponential gives a^q") {
  for (double a : {0.5, 2.0, 3.0}) {
    const ProfileFn h = exp_profile(a, 16);
    for (double q : {-0.7, -0.25, 0.3, 0.5, 1.5, 2.2})
      CHECK(std::abs(frac_deriv(h, q) - std::pow(a, q)) <= 1e-7 * std::pow(a, q));
  }
}

TEST_CASE("compactly supported profiles") {
  ProfileFn ind;
  ind.eval = [](double t) { return t <= 1.0 ? 1.0 : 0.0; };
  ind.taylor = {1.0, 0.0, 0.0};
  ind.support = 1.0;
  CHECK(std::abs(frac_deriv_strip(ind, -0.5) - 2.0 / std::sqrt(std::numbers::pi)) <= 1e-12);
  CHECK(std::abs(frac_deriv(ind, -0.5) - 2.0 / std::sqrt(std::numbers::pi)) <= 1e-12);

  const ProfileFn cub = cubic_profile();
  for (double q : {-0.9, -0.5, 0.25, 0.5, 1.5, 2.5, 3.5})
    CHECK(std::abs(frac_deriv(cub, q) - cubic_oracle(q)) <= 1e-10);

  // Support shorter than 1 exercises the polynomial gap on [support, 1].
  ProfileFn narrow;
  narrow.eval = [](double t) { return t < 0.5 ? std::pow(1.0 - 2.0 * t, 3) : 0.0; };
  narrow.taylor = {1.0, -6.0, 12.0, -8.0, 0.0, 0.0};
  narrow.support = 0.5;
  for (double q : {-0.5, 0.5, 1.5, 2.5})
    CHECK(std::abs(frac_deriv(narrow, q) - std::pow(2.0, q) * cubic_oracle(q)) <= 1e-9 * std::pow(2.0, q));
}

TEST_CASE("zero profile and linearity") {
  ProfileFn zero;
  zero.eval = [](double) { return 0.0; };
  zero.taylor.assign(6, 0.0);
  for (double q : {-0.5, 0.5, 2.5}) CHECK(frac_deriv(zero, q) == 0.0);

  const ProfileFn f = exp_profile(1.0), g = cubic_profile();
  ProfileFn mix;
  mix.eval = [&](double t) { return 2.0 * f.eval(t) - 0.5 * g.eval(t); };
  for (std::size_t k = 0; k < g.taylor.size(); ++k) mix.taylor.push_back(2.0 * f.taylor[k] - 0.5 * g.taylor[k]);
  for (double q : {-0.5, 0.5, 1.5})
    CHECK(std::abs(frac_deriv(mix, q) - (2.0 * frac_deriv(f, q) - 0.5 * frac_deriv(g, q))) <= 1e-10);
}

TEST_CASE("result does not depend on the Taylor order") {
  const ProfileFn h = exp_profile(1.5);
  for (double q : {-0.6, -0.2}) {
    const double strip = frac_deriv_strip(h, q);
    CHECK(std::abs(frac_deriv(h, q, 0) - strip) <= 1e-12);
    CHECK(std::abs(frac_deriv(h, q, 1) - strip) <= 1e-10);
    CHECK(std::abs(frac_deriv(h, q, 3) - strip) <= 1e-10);
  }
  CHECK(std::abs(frac_deriv(h, 0.5, 1) - frac_deriv(h, 0.5, 4)) <= 1e-10);
}

TEST_CASE("integer orders") {
  CHECK(frac_deriv_integer(exp_profile(1.0), 3) == doctest::Approx(1.0).epsilon(1e-15));
  ProfileFn quad;
  quad.eval = [](double t) { return 1.0 - t * t; };
  quad.taylor = {1.0, 0.0, -1.0};
  CHECK(frac_deriv_integer(quad, 2) == -2.0);
  CHECK(frac_deriv_integer(quad, 0) == 1.0);
}

TEST_CASE("continuation approaches the integer derivative") {
  const ProfileFn h = cubic_profile();
  for (int k : {1, 2}) {
    const double exact = frac_deriv_integer(h, k);
    const double e1 = std::abs(frac_deriv(h, k - 1e-3) - exact);
    const double e2 = std::abs(frac_deriv(h, k + 1e-4) - exact);
    CHECK(e1 <= 1e-2);
    CHECK(e2 <= 1e-3);
    // First-order approach: the gap shrinks with the distance to k.
    CHECK(e2 < e1);
  }
}

TEST_CASE("validation") {
  const ProfileFn h = exp_profile(1.0, 3);
  CHECK(code_of([&] { frac_deriv(h, 2.0); }) == ErrorCode::IntegerOrder);
  CHECK(code_of([&] { frac_deriv(h, -1.5); }) == ErrorCode::OrderOutOfRange);
  CHECK(code_of([&] { frac_deriv(h, 3.4); }) == ErrorCode::InsufficientTaylor);
  CHECK(code_of([&] { frac_deriv(h, 0.5, 0); }) == ErrorCode::InsufficientTaylor);
  CHECK(code_of([&] { frac_deriv_strip(h, 0.5); }) == ErrorCode::OrderOutOfRange);
  CHECK(code_of([&] { frac_deriv_integer(h, 3); }) == ErrorCode::InsufficientTaylor);

  ProfileFn slow;
  slow.eval = [](double) { return 1.0; };
  slow.taylor = {1.0};
  CHECK(code_of([&] { frac_deriv_strip(slow, -0.5); }) == ErrorCode::NonIntegrable);
  ProfileFn blowup;
  blowup.eval = [](double t) { return std::exp(t); };
  blowup.taylor = {1.0, 1.0, 0.5};
  CHECK(code_of([&] { frac_deriv(blowup, 0.5); }) == ErrorCode::NonIntegrable);
}

TEST_CASE("taylor coefficients from samples") {
  const auto c = taylor_from_samples([](double t) { return std::exp(-t); }, -0.5, 1.0, 8, 28);
  double fact = 1.0;
  for (int k = 0; k < 8; ++k) {
    if (k > 0) fact *= k;
    const double expect = (k % 2 == 0 ? 1.0 : -1.0) / fact;
    // Each derivative of the interpolant costs roughly a digit.
    CHECK(std::abs(c[k] - expect) <= 1e-13 * std::pow(10.0, k));
  }
  const auto p = taylor_from_samples([](double t) { return 2.0 - t + 3.0 * t * t * t; }, 0.0, 2.0, 5, 8);
  CHECK(std::abs(p[0] - 2.0) <= 1e-12);
  CHECK(std::abs(p[1] + 1.0) <= 1e-11);
  CHECK(std::abs(p[2]) <= 1e-10);
  CHECK(std::abs(p[3] - 3.0) <= 1e-9);
  CHECK(std::abs(p[4]) <= 1e-8);
}
