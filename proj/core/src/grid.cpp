#include "hagedorn/grid.hpp"

#include <cmath>
#include <string>

#include "hagedorn/error.hpp"

namespace hagedorn {

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) {
    throw Error(ErrorCode::UnsupportedDimension,
                "dense grids support 1 or 2 dimensions, got " + std::to_string(axes_.size()));
  }
  size_ = 1;
  for (const Axis& a : axes_) {
    if (a.count < 2 || !std::isfinite(a.lower) || !std::isfinite(a.upper) || !(a.upper > a.lower)) {
      throw Error(ErrorCode::GridMismatch, "grid axis needs finite bounds lower < upper and count >= 2");
    }
    size_ *= a.count;
  }
  const int d = dim();
  points_.resize(d, size_);
  weights_.resize(size_);
  for (Eigen::Index idx = 0; idx < size_; ++idx) {
    Eigen::Index rest = idx;
    double w = 1.0;
    for (int j = d - 1; j >= 0; --j) {
      const Axis& a = axes_[j];
      const int i = static_cast<int>(rest % a.count);
      rest /= a.count;
      points_(j, idx) = a.node(i);
      w *= (i == 0 || i == a.count - 1) ? 0.5 * a.spacing() : a.spacing();
    }
    weights_(idx) = w;
  }
}

Grid Grid::uniform(int n, double lower, double upper, int count) {
  return Grid(std::vector<Axis>(n, Axis{lower, upper, count}));
}

bool Grid::operator==(const Grid& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (size_t j = 0; j < axes_.size(); ++j) {
    const Axis& a = axes_[j];
    const Axis& b = other.axes_[j];
    if (a.lower != b.lower || a.upper != b.upper || a.count != b.count) return false;
  }
  return true;
}

Complex overlap(const CVector& f, const CVector& g, const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size()) {
    throw Error(ErrorCode::GridMismatch, "field size does not match the grid");
  }
  return (f.conjugate().cwiseProduct(g).array() * grid.weights().array().cast<Complex>()).sum();
}

double l2_norm(const CVector& f, const Grid& grid) {
  if (f.size() != grid.size()) throw Error(ErrorCode::GridMismatch, "field size does not match the grid");
  return std::sqrt((f.cwiseAbs2().array() * grid.weights().array()).sum());
}

}  // namespace hagedorn
