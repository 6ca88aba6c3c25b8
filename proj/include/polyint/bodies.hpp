#pragma once

#include <memory>
#include <string>
#include <variant>

#include "polyint/linalg.hpp"
#include "polyint/polytope.hpp"

namespace polyint {

struct BodySpec;

/// {x : (x - c)^T A (x - c) <= 1}, A symmetric positive definite.
struct EllipsoidSpec {
  Mat shape;
  Vec center;
};

/// {x : sum |(x_i - c_i) / a_i|^p <= 1}, p >= 1.
struct LpBallSpec {
  double p = 2.0;
  Vec semi_axes;
  Vec center;
};

/// {x : <a_i, x> <= b_i}; rows of `normals` are the a_i.
struct PolytopeSpec {
  Mat normals;
  Vec offsets;
};

/// inner + shift.
struct TranslateSpec {
  std::shared_ptr<const BodySpec> inner;
  Vec shift;
};

struct BodySpec {
  std::variant<EllipsoidSpec, LpBallSpec, PolytopeSpec, TranslateSpec> kind;
};

/// Parses the JSON body schema; throws InvalidSpec on malformed input.
BodySpec parse_body_spec(const std::string& json_text);
std::string body_spec_to_json(const BodySpec& spec);

/// Removes Translate nodes by moving centers and offsets.
BodySpec flatten(const BodySpec& spec);

enum class BodyFamily { Ellipsoid, LpBall, Polytope, RadialSum, Shifted };

/// Immutable star body in R^n (2 <= n <= 8) with the origin in its interior.
/// Copies share state; all methods are safe to call concurrently.
class Body {
 public:
  /// Validates and builds; throws DimensionOutOfRange, InvalidSpec or
  /// OriginNotInterior.
  static Body from_spec(const BodySpec& spec);
  static Body ellipsoid(const Mat& shape, const Vec& center);
  static Body lp_ball(double p, const Vec& semi_axes, const Vec& center);
  static Body polytope(const Mat& normals, const Vec& offsets);
  static Body ball(int n, double radius = 1.0);
  static Body cube(int n, double half_width = 1.0);

  int dim() const;
  BodyFamily family() const;

  /// Minkowski functional; 1-homogeneous, gauge(0) = 0.
  double gauge(const Vec& x) const;
  /// 1 / gauge(theta); NonStarShaped if the ray is unbounded.
  double radial(const Direction& theta) const;
  /// r >= 0 with gauge(p + r theta) = 1. PointNotInterior if gauge(p) >= 1.
  double radial_from_point(const Vec& p, const Direction& theta) const;
  /// As radial_from_point but without the interiority check; theta need not
  /// be normalized (the result is measured in units of |theta|).
  double ray_exit(Eigen::Ref<const Vec> p, Eigen::Ref<const Vec> theta) const;
  /// Central-difference gradient of the gauge.
  Vec gauge_gradient(const Vec& x) const;

  /// Cached bounds: min_radial from quadrature seeding plus local descent,
  /// max_radial an analytic upper bound.
  double min_radial() const;
  double max_radial() const;

  /// Non-null for the ellipsoid and polytope families.
  const EllipsoidSpec* as_ellipsoid() const;
  const PolytopeGeometry* as_polytope() const;
  /// The spec for the base families; throws InvalidSpec for derived bodies.
  BodySpec spec() const;

  struct Impl;

 private:
  explicit Body(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Body shifted(const Body& body, const Vec& c);
  friend Body radial_sum(const Body& k, const Body& l, double alpha, double beta);
  friend double min_radial(const Body& body, int degree);
};

/// K + c. Throws OriginNotInterior if the origin leaves the body.
Body shifted(const Body& body, const Vec& c);

/// K - v, whose gauge is <= 1 exactly where gauge_K(x + v) <= 1.
/// Throws OriginNotInterior unless v is interior to K.
Body translate(const Body& body, const Vec& v);

/// Star body with radial function alpha rho_K + beta rho_L.
Body radial_sum(const Body& k, const Body& l, double alpha, double beta);

/// Minimum of the radial function: sphere-rule seeding at `degree` plus 50
/// projected-gradient steps from the best seeds; exact for polytopes and
/// centered ellipsoids.
double min_radial(const Body& body, int degree);

}  // namespace polyint
