#pragma once

#include <functional>
#include <vector>

#include "hagedorn/types.hpp"

namespace hagedorn {

/// Complex symmetric 2n x 2n coefficient matrix H(t) of the quadratic
/// symbol (1/2) z . H(t) z.
class QuadraticHamiltonian {
 public:
  enum class Kind { Constant, Sampled, Polynomial, Function };

  /// Throws NonSymmetricH / DimensionMismatch.
  static QuadraticHamiltonian constant(CMatrix h, double tol = Tolerances{}.frame);
  /// Piecewise linear interpolation between samples; times strictly increasing.
  static QuadraticHamiltonian sampled(std::vector<double> times, std::vector<CMatrix> samples,
                                      double tol = Tolerances{}.frame);
  /// H(t) = sum_k coefficients[k] t^k.
  static QuadraticHamiltonian polynomial(std::vector<CMatrix> coefficients, double tol = Tolerances{}.frame);
  /// Arbitrary continuous H(t); symmetry is checked on every evaluation.
  static QuadraticHamiltonian function(int n, std::function<CMatrix(double)> h, double tol = Tolerances{}.frame);

  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  int n() const noexcept { return n_; }

  CMatrix at(double t) const;
  /// True when Im H vanishes on all stored data (sampled, polynomial, constant).
  bool is_real() const;

  /// Sample times strictly inside (t0, t1) where H is only continuous.
  std::vector<double> breakpoints(double t0, double t1) const;

  /// Valid time range; infinite for constant/polynomial/function.
  double t_min() const;
  double t_max() const;

 private:
  QuadraticHamiltonian() = default;

  Kind kind_ = Kind::Constant;
  int n_ = 0;
  double tol_ = 0.0;
  std::vector<double> times_;
  std::vector<CMatrix> data_;
  std::function<CMatrix(double)> fn_;
};

}  // namespace hagedorn
