#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace polyint {

/// A function h on [0, inf) that vanishes beyond `support`, with Taylor
/// coefficients c_k = h^{(k)}(0) / k! at the origin.
struct ProfileFn {
  std::function<double(double)> eval;
  std::vector<double> taylor;
  double support = std::numeric_limits<double>::infinity();
};

/// Taylor coefficients c_0..c_{count-1} at 0 of a function smooth on [a, b]
/// (a <= 0 < b), from the derivatives of its Chebyshev interpolant.
std::vector<double> taylor_from_samples(const std::function<double(double)>& f, double a, double b,
                                        int count, int nodes = 24);

/// (1 / Gamma(-q)) \int_0^inf t^{-1-q} h(t) dt for -1 < q < 0.
/// Throws OrderOutOfRange outside the strip and NonIntegrable when the tail
/// does not settle.
double frac_deriv_strip(const ProfileFn& h, double q);

/// Analytically continued fractional derivative of order q at 0, using the
/// Taylor polynomial of degree M - 1 on [0, 1]. Needs -1 < q < M with q not an
/// integer (IntegerOrder) and at least M Taylor coefficients
/// (InsufficientTaylor).
double frac_deriv(const ProfileFn& h, double q, int m);

/// Same, with M = round(q) + 1.
double frac_deriv(const ProfileFn& h, double q);

/// (-1)^k h^{(k)}(0). InsufficientTaylor without coefficient k.
double frac_deriv_integer(const ProfileFn& h, int k);

/// Dispatches integer q to frac_deriv_integer and the rest to frac_deriv.
double fractional_derivative(const ProfileFn& h, double q);

}  // namespace polyint
