#include "polyint/specialfn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polyint/error.hpp"

namespace polyint {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(int k, const Rational& c) {
  std::vector<Rational> v(static_cast<std::size_t>(k) + 1);
  v.back() = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

Rational RationalPoly::operator()(const Rational& z) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double RationalPoly::evaluate(double z) const {
  double acc = 0.0;
  const auto c = to_doubles();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<double> RationalPoly::to_doubles() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(static_cast<double>(c));
  return out;
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<int>(k);
  return RationalPoly(std::move(d));
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return RationalPoly(std::move(c));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  return a + Rational(-1) * b;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const Rational& s, const RationalPoly& p) {
  std::vector<Rational> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return RationalPoly(std::move(c));
}

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    os << "(" << coeffs_[k] << ")";
    if (k > 0) os << "*z^" << k;
    first = false;
  }
  return os.str();
}

double kappa(int n) {
  require(n >= 1, ErrorCode::DimensionOutOfRange, "kappa needs n >= 1");
  // Small dimensions in closed form; lgamma otherwise.
  const double pi = std::numbers::pi;
  switch (n) {
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    default: break;
  }
  const double h = 0.5 * n;
  return std::exp(h * std::log(pi) - std::lgamma(h + 1.0));
}

double sphere_area(int n) { return n * kappa(n); }

BallConstants ball_constants(int n) { return {n, kappa(n), sphere_area(n)}; }

DimLegendre legendre_nd(int l, int n) {
  require(l >= 0, ErrorCode::OrderOutOfRange, "Legendre degree must be >= 0");
  require(n >= 2, ErrorCode::DimensionOutOfRange, "Legendre dimension must be >= 2");
  RationalPoly prev = RationalPoly::constant(1);
  if (l == 0) return {0, n, prev};
  RationalPoly cur = RationalPoly::monomial(1);
  const RationalPoly z = RationalPoly::monomial(1);
  for (int k = 1; k < l; ++k) {
    const Rational a(2 * k + n - 2, k + n - 2);
    const Rational b(k, k + n - 2);
    RationalPoly next = a * (z * cur) - b * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {l, n, cur};
}

RationalPoly kernel_poly(int l, int m, int n) {
  require(m >= 2, ErrorCode::OrderOutOfRange, "kernel_poly needs m >= 2");
  require(m % 2 == 0, ErrorCode::OddM, "kernel is not polynomial for odd m");
  require(l >= 0 && l + m <= 64, ErrorCode::OrderOutOfRange, "kernel_poly needs 0 <= l and l + m <= 64");
  const RationalPoly one_minus_z2({Rational(1), Rational(0), Rational(-1)});
  RationalPoly factor = RationalPoly::constant(1);
  for (int j = 0; j < (m - 2) / 2; ++j) factor = factor * one_minus_z2;
  return legendre_nd(l, n).poly * factor;
}

double rgamma(double x) {
  const double nearest = std::round(x);
  if (x < 0.5 && std::abs(x - nearest) < 0.25) {
    // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi, with sin evaluated at the
    // small offset from the nearest integer to keep relative accuracy.
    const double frac = x - nearest;
    const double sign = (static_cast<long long>(nearest) % 2 == 0) ? 1.0 : -1.0;
    return std::tgamma(1.0 - x) * sign * std::sin(std::numbers::pi * frac) / std::numbers::pi;
  }
  return 1.0 / std::tgamma(x);
}

}  // namespace polyint
