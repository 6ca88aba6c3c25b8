#include "polyint/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "polyint/error.hpp"
#include "polyint/quadrature.hpp"

namespace polyint {

namespace {

constexpr double kMaxCandidates = 4e6;

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(k);
  for (int j = 0; j < k; ++j) idx[j] = j;
  if (k > n) return;
  while (true) {
    f(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == n - k + j) --j;
    if (j < 0) return;
    ++idx[j];
    for (int r = j + 1; r < k; ++r) idx[r] = idx[r - 1] + 1;
  }
}

int matrix_rank(const Mat& m, double rel_tol = 1e-10) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

Mat rows_of(const Mat& a, std::uint64_t mask) {
  Mat out(std::popcount(mask), a.cols());
  int r = 0;
  for (int i = 0; i < a.rows(); ++i)
    if (mask >> i & 1u) out.row(r++) = a.row(i);
  return out;
}

// Orthonormal basis (columns) of the directions spanned by a point set,
// by pivoted Gram-Schmidt on the offsets from the first point. Directions
// shorter than 1e-9 * scale count as degenerate.
Mat affine_hull(const std::vector<Vec>& pts, const std::vector<int>& ids, double scale) {
  const Eigen::Index k = pts[ids[0]].size();
  if (ids.size() <= 1) return Mat(k, 0);
  Mat d(k, ids.size() - 1);
  for (std::size_t r = 1; r < ids.size(); ++r) d.col(r - 1) = pts[ids[r]] - pts[ids[0]];
  Mat basis(k, std::min<Eigen::Index>(k, d.cols()));
  Eigen::Index rank = 0;
  const double tol = 1e-9 * scale;
  while (rank < basis.cols()) {
    Eigen::Index best = 0;
    const double len = d.colwise().norm().maxCoeff(&best);
    if (!(len > tol)) break;
    Vec q = d.col(best) / len;
    // One re-orthogonalization pass keeps the basis orthonormal to rounding.
    q -= basis.leftCols(rank) * (basis.leftCols(rank).transpose() * q);
    q.normalize();
    basis.col(rank++) = q;
    d -= q * (q.transpose() * d);
  }
  return basis.leftCols(rank);
}

int affine_dim(const std::vector<Vec>& pts, const std::vector<int>& ids, double scale) {
  return static_cast<int>(affine_hull(pts, ids, scale).cols());
}

std::vector<std::uint64_t> tight_masks(const Mat& g, const Vec& h, const std::vector<Vec>& pts) {
  std::vector<std::uint64_t> masks(pts.size(), 0);
  for (std::size_t v = 0; v < pts.size(); ++v) {
    for (int i = 0; i < g.rows(); ++i) {
      const double gn = g.row(i).norm();
      if (gn < 1e-12 * std::abs(h[i])) continue;
      const double tol = 1e-9 * (std::abs(h[i]) + gn * pts[v].norm());
      if (std::abs(g.row(i).dot(pts[v]) - h[i]) <= tol) masks[v] |= std::uint64_t{1} << i;
    }
  }
  return masks;
}

void push_unique(std::vector<Vec>& pts, const Vec& x, double scale) {
  for (const auto& q : pts)
    if ((q - x).norm() <= 1e-10 * scale) return;
  pts.push_back(x);
}

// cos(pi l (k + 1/2) / len), row-major in (l, k); one table per thread and length.
const std::vector<double>& dct_table(int len) {
  thread_local std::map<int, std::vector<double>> tables;
  auto [it, fresh] = tables.try_emplace(len);
  if (fresh) {
    it->second.resize(static_cast<std::size_t>(len) * len);
    for (int l = 0; l < len; ++l)
      for (int k = 0; k < len; ++k) it->second[l * len + k] = std::cos(std::numbers::pi * l * (k + 0.5) / len);
  }
  return it->second;
}

struct FaceWalk {
  const std::vector<Vec>& pts;
  const std::vector<std::uint64_t>& masks;
  int constraints;
  double scale;
  const IntervalRule& gl;

  // Everything about a face that does not depend on the recursion path.
  struct Subface {
    std::vector<int> ids;
    Mat basis;
    Vec origin;
    Vec inward;
  };
  struct FaceInfo {
    Mat basis;
    std::vector<Subface> subs;
  };
  mutable std::map<std::vector<int>, FaceInfo> cache;

  const FaceInfo& info(const std::vector<int>& ids, int j) const {
    auto [it, fresh] = cache.try_emplace(ids);
    if (!fresh) return it->second;
    FaceInfo& f = it->second;
    f.basis = affine_hull(pts, ids, scale);
    Vec centroid = Vec::Zero(pts[ids[0]].size());
    for (int v : ids) centroid += pts[v];
    centroid /= static_cast<double>(ids.size());
    std::set<std::vector<int>> seen;
    for (int bit = 0; bit < constraints; ++bit) {
      std::vector<int> sub;
      for (int v : ids)
        if (masks[v] >> bit & 1u) sub.push_back(v);
      if (static_cast<int>(sub.size()) < j || sub.size() == ids.size() || !seen.insert(sub).second) continue;
      Mat bs = affine_hull(pts, sub, scale);
      if (bs.cols() != j - 1) continue;
      const Vec& w0 = pts[sub[0]];
      Vec inward = centroid - (w0 + bs * (bs.transpose() * (centroid - w0)));
      f.subs.push_back(Subface{std::move(sub), std::move(bs), w0, std::move(inward)});
    }
    return f;
  }

  // \int_H delta |w - c|^{-(j+1)} phi(|w - c|) dw for the j-face H, where
  // delta = dist(c, aff H) > 0. In polar coordinates about the foot q of c
  // on aff H this becomes a signed sum over the subfaces of H of the same
  // quantity one dimension down, with phi replaced by its polar-angle
  // integral.
  double integrate(const std::vector<int>& ids, int j, const Vec& c, double delta,
                   const std::function<double(double)>& phi) const {
    if (j == 0) return phi((pts[ids[0]] - c).norm());
    const FaceInfo& face = info(ids, j);
    const Vec& v0 = pts[ids[0]];
    const Vec q = v0 + face.basis * (face.basis.transpose() * (c - v0));

    // Polar angle psi about the foot, written as tan(psi) = sinh(u) so that
    // phi(delta cosh u) stays smooth when the face is far from the foot.
    auto lifted_at = [&, j, delta](double top) {
      double acc = 0.0;
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double e = std::exp(0.5 * top * (1.0 + gl.nodes[i]));
        const double ch = 0.5 * (e + 1.0 / e);
        const double th = (e - 1.0 / e) / (e + 1.0 / e);
        double pw = 1.0;
        for (int p = 1; p < j; ++p) pw *= th;
        acc += gl.weights[i] * pw * phi(delta * ch) / ch;
      }
      return 0.5 * top * acc;
    };
    std::function<double(double)> lifted = [&, delta](double r) { return lifted_at(std::asinh(r / delta)); };
    // Deeper faces evaluate the lifted function many times; replace it by a
    // Chebyshev interpolant in u over the range the subfaces can reach.
    std::vector<double> cheb;
    if (j >= 2) {
      double reach = 0.0;
      for (int v : ids) reach = std::max(reach, (pts[v] - q).norm());
      const double umax = std::asinh(reach / delta) * (1.0 + 1e-12) + 1e-300;
      const int len = 2 * static_cast<int>(gl.size()) + 2;
      std::vector<double> vals(len);
      for (int k = 0; k < len; ++k)
        vals[k] = lifted_at(0.5 * umax * (1.0 + std::cos(std::numbers::pi * (k + 0.5) / len)));
      const std::vector<double>& table = dct_table(len);
      cheb.assign(len, 0.0);
      for (int l = 0; l < len; ++l) {
        double acc = 0.0;
        for (int k = 0; k < len; ++k) acc += vals[k] * table[l * len + k];
        cheb[l] = (l == 0 ? 1.0 : 2.0) * acc / len;
      }
      lifted = [&cheb, umax, delta](double r) {
        const double x = std::min(1.0, 2.0 * std::asinh(r / delta) / umax - 1.0);
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t l = cheb.size() - 1; l >= 1; --l) {
          const double tmp = 2.0 * x * b1 - b2 + cheb[l];
          b2 = b1;
          b1 = tmp;
        }
        return x * b1 - b2 + cheb[0];
      };
    }

    double total = 0.0;
    for (const Subface& sub : face.subs) {
      const Vec u = q - (sub.origin + sub.basis * (sub.basis.transpose() * (q - sub.origin)));
      const double dist = u.norm();
      if (dist <= 1e-13 * scale) continue;
      const double sign = u.dot(sub.inward) >= 0.0 ? 1.0 : -1.0;
      total += sign * integrate(sub.ids, j - 1, q, dist, lifted);
    }
    return total;
  }
};

}  // namespace

int PolytopeGeometry::facet_count() const {
  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, v.norm());
  int count = 0;
  for (int i = 0; i < halfspaces(); ++i) {
    std::vector<int> ids;
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (vertex_masks[v] >> i & 1u) ids.push_back(static_cast<int>(v));
    if (static_cast<int>(ids.size()) >= dim() && affine_dim(vertices, ids, scale) == dim() - 1) ++count;
  }
  return count;
}

PolytopeGeometry build_polytope_geometry(const Mat& normals, const Vec& offsets) {
  const int hs = static_cast<int>(normals.rows());
  const int n = static_cast<int>(normals.cols());
  require(hs == offsets.size(), ErrorCode::InvalidSpec, "polytope: normals/offsets size mismatch");
  require(hs <= 64, ErrorCode::InvalidSpec, "polytope: at most 64 halfspaces are supported");
  require(hs > n, ErrorCode::InvalidSpec, "polytope: needs more than n halfspaces to be bounded");
  require(binomial(hs, n) <= kMaxCandidates, ErrorCode::InvalidSpec, "polytope: too many vertex candidates");
  for (int i = 0; i < hs; ++i) {
    require(normals.row(i).allFinite() && normals.row(i).norm() > 0.0, ErrorCode::InvalidSpec,
            "polytope: normals must be finite and nonzero");
    require(std::isfinite(offsets[i]), ErrorCode::InvalidSpec, "polytope: offsets must be finite");
    require(offsets[i] > 0.0, ErrorCode::OriginNotInterior, "polytope: offsets must be positive");
  }
  require(matrix_rank(normals) == n, ErrorCode::InvalidSpec, "polytope: unbounded (normals do not span)");

  // Bounded iff the recession cone {d : A d <= 0} is trivial; a nontrivial
  // pointed cone has an extreme ray cut out by n-1 constraints.
  Mat unit = normals;
  for (int i = 0; i < hs; ++i) unit.row(i).normalize();
  bool bounded = true;
  for_each_subset(hs, n - 1, [&](const std::vector<int>& idx) {
    if (!bounded) return;
    Mat sub(n - 1, n);
    for (int j = 0; j < n - 1; ++j) sub.row(j) = unit.row(idx[j]);
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() != n - 1) return;
    Vec d = lu.kernel().col(0);
    d.normalize();
    for (double sgn : {1.0, -1.0}) {
      if (((sgn * unit * d).array() <= 1e-12).all()) bounded = false;
    }
  });
  require(bounded, ErrorCode::InvalidSpec, "polytope: unbounded");

  PolytopeGeometry geo;
  geo.normals = normals;
  geo.offsets = offsets;
  const double bscale = offsets.maxCoeff();
  for_each_subset(hs, n, [&](const std::vector<int>& idx) {
    Mat sub(n, n);
    Vec rhs(n);
    for (int j = 0; j < n; ++j) {
      sub.row(j) = normals.row(idx[j]);
      rhs[j] = offsets[idx[j]];
    }
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    const Vec x = lu.solve(rhs);
    for (int i = 0; i < hs; ++i)
      if (normals.row(i).dot(x) > offsets[i] + 1e-9 * (offsets[i] + normals.row(i).norm() * x.norm())) return;
    push_unique(geo.vertices, x, bscale + x.norm());
  });
  require(static_cast<int>(geo.vertices.size()) > n, ErrorCode::InvalidSpec, "polytope: degenerate");
  geo.vertex_masks = tight_masks(normals, offsets, geo.vertices);

  for (std::size_t i = 0; i < geo.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < geo.vertices.size(); ++j) {
      const std::uint64_t common = geo.vertex_masks[i] & geo.vertex_masks[j];
      if (std::popcount(common) < n - 1) continue;
      if (matrix_rank(rows_of(normals, common)) == n - 1)
        geo.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return geo;
}

double polytope_sphere_integral(const Mat& g, const Vec& h, const std::vector<Vec>& vertices,
                                const std::function<double(double)>& phi, int order) {
  const int k = static_cast<int>(g.cols());
  const int hs = static_cast<int>(g.rows());
  require(hs <= 64, ErrorCode::InvalidSpec, "polytope: at most 64 halfspaces are supported");
  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, v.norm());
  const auto masks = tight_masks(g, h, vertices);
  const FaceWalk walk{vertices, masks, hs, std::max(scale, 1e-300),
                      detail::cached_gauss_jacobi(order, 0.0, 0.0)};

  double total = 0.0;
  std::set<std::vector<int>> facets;
  for (int i = 0; i < hs; ++i) {
    std::vector<int> ids;
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (masks[v] >> i & 1u) ids.push_back(static_cast<int>(v));
    if (static_cast<int>(ids.size()) < k || !facets.insert(ids).second) continue;
    if (affine_dim(vertices, ids, scale) != k - 1) continue;
    total += walk.integrate(ids, k - 1, Vec::Zero(k), h[i] / g.row(i).norm(), phi);
  }
  return total;
}

double polytope_section_integral(const PolytopeGeometry& geo, const Vec& p, const Vec& xi,
                                 const Mat& basis, const std::function<double(double)>& phi,
                                 int order) {
  double scale = p.norm();
  for (const auto& v : geo.vertices) scale = std::max(scale, v.norm());
  const double tol = 1e-12 * scale;

  std::vector<double> s(geo.vertices.size());
  for (std::size_t v = 0; v < geo.vertices.size(); ++v) s[v] = (geo.vertices[v] - p).dot(xi);

  std::vector<Vec> local;
  for (std::size_t v = 0; v < geo.vertices.size(); ++v)
    if (std::abs(s[v]) <= tol) push_unique(local, basis.transpose() * (geo.vertices[v] - p), scale);
  for (const auto& [i, j] : geo.edges) {
    if (std::abs(s[i]) <= tol || std::abs(s[j]) <= tol || (s[i] > 0) == (s[j] > 0)) continue;
    const double lam = s[i] / (s[i] - s[j]);
    const Vec x = geo.vertices[i] + lam * (geo.vertices[j] - geo.vertices[i]);
    push_unique(local, basis.transpose() * (x - p), scale);
  }
  const Mat g = geo.normals * basis;
  const Vec h = geo.offsets - geo.normals * p;
  require((h.array() > 0.0).all(), ErrorCode::PointNotInterior, "section point is not interior");
  return polytope_sphere_integral(g, h, local, phi, order);
}

}  // namespace polyint
