#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyint {

using Rational = boost::multiprecision::cpp_rational;

/// Univariate polynomial with exact rational coefficients, ascending degree.
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);

  static RationalPoly constant(const Rational& c);
  /// c * z^k
  static RationalPoly monomial(int k, const Rational& c = 1);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Coefficient of z^k; zero beyond the degree.
  Rational coeff(int k) const;
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  Rational operator()(const Rational& z) const;
  double evaluate(double z) const;
  std::vector<double> to_doubles() const;

  RationalPoly derivative() const;

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const Rational& s, const RationalPoly& p);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Legendre polynomial of degree l and dimension n, normalized by P(1) = 1.
struct DimLegendre {
  int degree = 0;
  int dim = 0;
  RationalPoly poly;
};

struct BallConstants {
  int n = 0;
  double kappa = 0.0;    // volume of the unit ball in R^n
  double surface = 0.0;  // |S^{n-1}| = n kappa_n
};

/// pi^{n/2} / Gamma(n/2 + 1), n >= 1.
double kappa(int n);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2), n >= 1.
double sphere_area(int n);

BallConstants ball_constants(int n);

/// (l + n - 2) P_{l+1} = (2l + n - 2) z P_l - l P_{l-1}, P_0 = 1, P_1 = z.
DimLegendre legendre_nd(int l, int n);

/// P_l^n(z) (1 - z^2)^{(m-2)/2} for even m >= 2. Throws OddM for odd m and
/// OrderOutOfRange when l + m > 64.
RationalPoly kernel_poly(int l, int m, int n);

/// Reciprocal Gamma function, accurate near the poles of Gamma.
double rgamma(double x);

}  // namespace polyint
