#pragma once

#include <Eigen/Dense>

namespace polyint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point of the unit sphere S^{n-1}. The norm is 1 up to rounding.
class Direction {
 public:
  /// Normalizes `v`; throws InvalidSpec for a (near) zero vector.
  static Direction normalized(const Vec& v);

  /// i-th coordinate axis of R^n.
  static Direction axis(int n, int i);

  const Vec& vec() const noexcept { return v_; }
  int dim() const noexcept { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }

  Direction operator-() const { return Direction(-v_); }

 private:
  explicit Direction(Vec v) : v_(std::move(v)) {}
  Vec v_;
};

/// Orthonormal basis (columns) of the orthogonal complement of `xi`.
///
/// The coordinate with the largest |xi_i| is dropped first and the remaining
/// axes are Gram-Schmidt orthogonalized against xi in increasing index
/// order, so the frame is a deterministic function of xi.
Mat complement_basis(const Direction& xi);

}  // namespace polyint
