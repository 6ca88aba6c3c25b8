#include "polyint/linalg.hpp"

#include "polyint/error.hpp"

namespace polyint {

Direction Direction::normalized(const Vec& v) {
  const double norm = v.norm();
  require(v.size() >= 1 && std::isfinite(norm) && norm > 1e-300, ErrorCode::InvalidSpec,
          "direction must be a finite nonzero vector");
  Vec u = v / norm;
  // One refinement step keeps |u| within an ulp or two of 1.
  u /= u.norm();
  return Direction(std::move(u));
}

Direction Direction::axis(int n, int i) {
  require(n >= 1 && i >= 0 && i < n, ErrorCode::InvalidSpec, "axis index out of range");
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return Direction(std::move(e));
}

Mat complement_basis(const Direction& xi) {
  const int n = xi.dim();
  const Vec& x = xi.vec();
  int pivot = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(x[i]) > std::abs(x[pivot])) pivot = i;
  }
  Mat basis(n, n - 1);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (i == pivot) continue;
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    // Two passes of modified Gram-Schmidt for orthogonality to ~1e-16.
    for (int pass = 0; pass < 2; ++pass) {
      e -= x.dot(e) * x;
      for (int j = 0; j < col; ++j) e -= basis.col(j).dot(e) * basis.col(j);
    }
    basis.col(col++) = e.normalized();
  }
  return basis;
}

}  // namespace polyint
