#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "polyint/linalg.hpp"

namespace polyint {

/// Vertex/edge skeleton of a bounded H-polytope {x : A x <= b}, b > 0.
///
/// Tight sets are bit masks over halfspaces, so at most 64 halfspaces are
/// supported. Vertices with more than n tight constraints are merged.
struct PolytopeGeometry {
  Mat normals;  // H x n, one outward normal per row
  Vec offsets;  // H
  std::vector<Vec> vertices;
  std::vector<std::uint64_t> vertex_masks;
  std::vector<std::pair<int, int>> edges;

  int dim() const noexcept { return static_cast<int>(normals.cols()); }
  int halfspaces() const noexcept { return static_cast<int>(normals.rows()); }

  /// Number of halfspaces whose tight vertices span a facet (dimension n-1).
  int facet_count() const;
};

/// Throws InvalidSpec if the polytope is unbounded, has a nonpositive
/// offset, more than 64 halfspaces, or too many vertex candidates.
PolytopeGeometry build_polytope_geometry(const Mat& normals, const Vec& offsets);

/// \int_{S^{k-1}} phi(rho(theta)) dtheta for the convex polytope
/// Q = {z in R^k : G z <= h} (h > 0) with known vertices, where rho is the
/// radial function of Q about the origin. Uses the cone decomposition
///   \int phi(rho) dtheta = sum_F h_F \int_F phi(|z|) |z|^{-k} dz
/// over facets F. Each facet integral is taken in nested polar coordinates
/// about the foot of the perpendicular (a signed cone decomposition over
/// faces), with an `order`-point Gauss-Legendre rule per polar angle.
double polytope_sphere_integral(const Mat& g, const Vec& h, const std::vector<Vec>& vertices,
                                const std::function<double(double)>& phi, int order);

/// Radial-function integral over S^{n-1} ∩ xi^perp for the section
/// P ∩ (p + xi^perp), where basis (n x (n-1), orthonormal) spans xi^perp and
/// p is interior. Vertices of the section come from edges crossing the plane.
double polytope_section_integral(const PolytopeGeometry& geo, const Vec& p, const Vec& xi,
                                 const Mat& basis,
                                 const std::function<double(double)>& phi, int order);

}  // namespace polyint
