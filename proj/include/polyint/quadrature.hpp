#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polyint/linalg.hpp"

namespace polyint {

/// Quadrature rule on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta.
/// Gauss-Legendre rules have alpha = beta = 0.
struct IntervalRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exact_degree = 0;
  double alpha = 0.0;
  double beta = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }

  /// Integral over [a, b] of f, with the rule's weight mapped affinely.
  double integrate(const std::function<double(double)>& f, double a = -1.0,
                   double b = 1.0) const;
};

/// n-point Gauss-Legendre rule, 1 <= order <= 512. Throws OrderOutOfRange.
IntervalRule gauss_legendre(int order);

/// n-point Gauss-Jacobi rule for (1 - x)^alpha (1 + x)^beta, alpha, beta > -1.
IntervalRule gauss_jacobi(int order, double alpha, double beta);

/// Nodes and weights on S^{n-1}. `nodes` holds one point per column.
struct SphereRule {
  int dim = 0;
  Mat nodes;
  Vec weights;
  int exact_degree = 0;

  Eigen::Index size() const noexcept { return weights.size(); }
};

/// Product rule on S^{n-1}, 2 <= n <= 8, exact for polynomials of total
/// degree <= `degree`. Throws DimensionOutOfRange.
///
/// The sphere is peeled one polar coordinate at a time: for S^{d-1} the last
/// coordinate z carries the weight (1 - z^2)^{(d-3)/2}, integrated with a
/// Gauss-Jacobi rule of degree/2 + 1 points, and the remaining coordinates
/// are sqrt(1 - z^2) times a point of S^{d-2}. S^1 uses degree + 1 equally
/// spaced azimuths.
SphereRule sphere_rule(int n, int degree);

/// Quadrature on S^{n-1} ∩ xi^perp embedded in R^n.
struct SubsphereRule {
  Direction axis;
  Mat basis;  // n x (n-1), orthonormal, spans xi^perp
  Mat nodes;  // n x N
  Vec weights;
  int exact_degree = 0;

  Eigen::Index size() const noexcept { return weights.size(); }
};

/// For n = 2 the result is the two-point counting rule on S^0.
SubsphereRule subsphere_rule(const Direction& xi, int degree);

struct GrassmannSampler {
  int ambient = 0;      // n
  int dim = 0;          // i, the subspace dimension
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Haar-distributed orthonormal n x i frames. Frame k depends only on
/// (seed, k), never on how many frames are drawn or in which order.
std::vector<Mat> haar_frames(const GrassmannSampler& sampler);

Mat haar_frame(int ambient, int dim, std::uint64_t seed, std::uint64_t index);

struct SplitCheck {
  double lhs = 0.0;     // Monte-Carlo average over G(xi^perp, m)
  double rhs = 0.0;     // deterministic sub-sphere quadrature
  double std_error = 0.0; // standard error of lhs
};

/// Compares \int_{G(xi^perp,m)} \int_{S ∩ H} f against
/// m kappa_m / ((n-1) kappa_{n-1}) \int_{S ∩ xi^perp} f.
SplitCheck grassmann_sphere_split_check(const Direction& xi, int m,
                                        const std::function<double(const Vec&)>& f,
                                        int samples, std::uint64_t seed, int degree = 12);

namespace detail {

/// Shared, immutable rule for any 1 <= n <= 9 (S^0 included).
const SphereRule& cached_sphere_rule(int n, int degree);

const IntervalRule& cached_gauss_jacobi(int order, double alpha, double beta);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace detail

}  // namespace polyint
