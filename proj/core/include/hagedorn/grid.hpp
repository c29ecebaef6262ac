#pragma once

#include <vector>

#include "hagedorn/types.hpp"

namespace hagedorn {

struct Axis {
  double lower = -10.0;
  double upper = 10.0;
  int count = 1024;

  double spacing() const { return (upper - lower) / (count - 1); }
  double node(int i) const { return lower + i * spacing(); }
};

/// Dense tensor grid with uniform axes, n <= 2. Points are ordered with the
/// last axis fastest.
class Grid {
 public:
  explicit Grid(std::vector<Axis> axes);
  static Grid uniform(int n, double lower, double upper, int count);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  Eigen::Index size() const noexcept { return size_; }

  /// dim x size matrix of node coordinates.
  const RMatrix& points() const noexcept { return points_; }
  /// Tensor trapezoid weights.
  const RVector& weights() const noexcept { return weights_; }

  bool operator==(const Grid& other) const;

 private:
  std::vector<Axis> axes_;
  Eigen::Index size_ = 0;
  RMatrix points_;
  RVector weights_;
};

/// Trapezoid inner product  sum w f-bar g  (conjugate-linear in f).
Complex overlap(const CVector& f, const CVector& g, const Grid& grid);
double l2_norm(const CVector& f, const Grid& grid);

}  // namespace hagedorn
