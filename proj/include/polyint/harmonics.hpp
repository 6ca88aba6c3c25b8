#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polyint/linalg.hpp"
#include "polyint/quadrature.hpp"
#include "polyint/specialfn.hpp"

namespace polyint {

/// Zonal kernel Phi(<xi, theta>) given by its profile on [-1, 1].
struct ZonalKernel {
  std::function<double(double)> profile;
};

/// \int_{-1}^1 Phi(t) P_l^n(t) (1 - t^2)^{(n-3)/2} dt with `rule`. The rule's
/// own Jacobi weight is divided out, so a matching Gauss-Jacobi rule makes
/// polynomial kernels exact. For n = 2 the weight is singular: pass
/// `cos_substitution` to integrate over t = cos(phi) instead, otherwise
/// EndpointSingularity (unless the rule already carries the Chebyshev weight).
double funk_hecke_multiplier(const ZonalKernel& kernel, int l, int n, const IntervalRule& rule,
                             bool cos_substitution = false);

/// A spherical harmonic of degree l on S^{n-1}, evaluated at unit vectors.
struct Harmonic {
  int degree = 0;
  std::string name;
  std::function<double(const Vec&)> eval;
};

/// Fixed list of coordinate harmonics of degree l <= 4 in dimension n >= 2.
std::vector<Harmonic> builtin_harmonics(int l, int n);

struct OperatorNormCheck {
  double max_deviation = 0.0;  // max over xi and harmonics of |LHS - |S^{n-2}| lambda H(xi)|
  double lambda = 0.0;         // funk_hecke_multiplier
  double scale = 0.0;          // max |LHS|, for relative comparisons
};

/// Compares \int_{S^{n-1}} Phi(<xi, theta>) H(theta) d theta with
/// |S^{n-2}| lambda_l H(xi) for every built-in harmonic of degree l.
OperatorNormCheck operator_norm_check(const ZonalKernel& kernel, int l, int n,
                                      const std::vector<Direction>& xi_grid, int degree = 30);

/// (1 / Gamma(-q)) \int_0^1 P_l^n(z) z^{-1-q} (1 - z^2)^{(m-2)/2} dz for
/// -1 < q < 0 and m >= 1, by Gauss-Jacobi with the endpoint weights built in.
double lambda_numeric(int l, double q, int m, int n);

/// The same multiplier continued to every non-integer q > -1 as the
/// fractional derivative at 0 of the kernel polynomial on [0, 1]. m even.
double lambda_continuation(int l, double q, int m, int n);

/// (-1)^k k! [z^k] P_l^n(z) (1 - z^2)^{(m-2)/2}, exactly. m even >= 2.
Rational lambda_exact(int l, int k, int m, int n);

/// True iff lambda_l(k) is nonzero: k - l even and m >= k - l + 2.
bool vanishing_predicate(int l, int k, int m);

struct MultiplierEntry {
  int l = 0, k = 0, m = 0, n = 0;
  Rational value;
  bool predicted_nonzero = false;
};

/// Exact lambda_l(k) for l, k <= l_max and every listed (m, n), ordered by
/// (l, k, m, n).
struct MultiplierTable {
  int l_max = 0;
  std::vector<int> ms;
  std::vector<int> ns;
  std::vector<MultiplierEntry> entries;

  /// Throws OrderOutOfRange for a tuple outside the table.
  const MultiplierEntry& at(int l, int k, int m, int n) const;
};

/// ms must be even and >= 2, ns >= 2; duplicates are dropped and both sorted.
MultiplierTable build_multiplier_table(int l_max, std::vector<int> ms, std::vector<int> ns,
                                       int threads = 0);

/// Header l,k,m,n,numerator,denominator,is_zero,predicted_zero.
std::string multiplier_table_csv(const MultiplierTable& table);

}  // namespace polyint
