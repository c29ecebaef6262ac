#pragma once

#include <functional>

#include "hagedorn/types.hpp"

namespace hagedorn {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: pick from the right-hand side
  double max_step = 0.0;      // 0: unbounded
  double min_step = 1e-14;    // relative to the interval length
  long max_steps = 1'000'000;
};

/// One accepted step with the Dormand-Prince continuous extension.
class DenseStep {
 public:
  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  const CVector& y0() const noexcept { return y0_; }
  const CVector& y1() const noexcept { return y1_; }
  /// Fourth-order interpolant for t in [t0, t1].
  CVector operator()(double t) const;

 private:
  friend class Dopri5;
  double t0_ = 0.0, t1_ = 0.0;
  CVector y0_, y1_, r1_, r2_, r3_, r4_;
};

/// Explicit Runge-Kutta 5(4) of Dormand and Prince with step-size control
/// on a weighted RMS error norm. Throws StepSizeUnderflow.
class Dopri5 {
 public:
  using Rhs = std::function<void(double t, const CVector& y, CVector& dy)>;
  /// Called after each accepted step; return false to stop early.
  using Observer = std::function<bool(const DenseStep&)>;

  Dopri5(Rhs rhs, OdeOptions options);

  /// Integrates from t0 to t1 (t1 >= t0), landing exactly on t1.
  CVector integrate(double t0, double t1, CVector y, const Observer& observer = {});

  long accepted_steps() const noexcept { return accepted_; }
  long rejected_steps() const noexcept { return rejected_; }

 private:
  double initial_step(double t0, const CVector& y0, const CVector& f0, double span) const;
  double error_norm(const CVector& err, const CVector& y0, const CVector& y1) const;

  Rhs rhs_;
  OdeOptions opt_;
  double h_ = 0.0;  // last proposed step, reused between calls
  long accepted_ = 0;
  long rejected_ = 0;
};

}  // namespace hagedorn
