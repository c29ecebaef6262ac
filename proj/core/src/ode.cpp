#include "hagedorn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hagedorn/error.hpp"

namespace hagedorn {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

CVector DenseStep::operator()(double t) const {
  const double h = t1_ - t0_;
  if (h == 0.0) return y1_;
  const double s = (t - t0_) / h;
  const double s1 = 1.0 - s;
  return y0_ + s * (r1_ + s1 * (r2_ + s * (r3_ + s1 * r4_)));
}

Dopri5::Dopri5(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), opt_(options) {}

double Dopri5::error_norm(const CVector& err, const CVector& y0, const CVector& y1) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

double Dopri5::initial_step(double t0, const CVector& y0, const CVector& f0, double span) const {
  if (opt_.initial_step > 0.0) return std::min(opt_.initial_step, span);
  const double dy = error_norm(y0, y0, y0);
  const double df = error_norm(f0, y0, y0);
  double h0 = (dy < 1e-5 || df < 1e-5) ? 1e-6 : 0.01 * dy / df;
  h0 = std::min(h0, span);
  CVector y1 = y0 + h0 * f0;
  CVector f1(y0.size());
  rhs_(t0 + h0, y1, f1);
  const double d2 = error_norm(CVector(f1 - f0), y0, y0) / h0;
  const double dmax = std::max(df, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

CVector Dopri5::integrate(double t0, double t1, CVector y, const Observer& observer) {
  if (t1 < t0) throw Error(ErrorCode::DimensionMismatch, "integration interval must be forward in time");
  const double span = t1 - t0;
  if (span == 0.0) return y;
  const Eigen::Index m = y.size();
  CVector k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m), y_new(m);
  double t = t0;
  rhs_(t, y, k1);
  double h = h_ > 0.0 ? std::min(h_, span) : initial_step(t0, y, k1, span);
  if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
  const double h_min = opt_.min_step * std::max(1.0, std::abs(t1));
  bool last_rejected = false;
  long steps = 0;
  DenseStep dense;

  while (t < t1) {
    if (++steps > opt_.max_steps) {
      throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted at t = " + std::to_string(t));
    }
    bool final_step = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    tmp = y + h * a21 * k1;
    rhs_(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs_(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(t + h, tmp, k6);
    y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs_(t + h, y_new, k7);
    const CVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y_new);

    if (!std::isfinite(en)) {
      h *= 0.2;
      ++rejected_;
      last_rejected = true;
      if (h < h_min) {
        throw Error(ErrorCode::StepSizeUnderflow, "non-finite state near t = " + std::to_string(t));
      }
      continue;
    }
    double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    if (en <= 1.0) {
      ++accepted_;
      dense.t0_ = t;
      dense.t1_ = final_step ? t1 : t + h;
      if (observer) {
        const CVector diff = y_new - y;
        const CVector bspl = h * k1 - diff;
        dense.y0_ = y;
        dense.y1_ = y_new;
        dense.r1_ = diff;
        dense.r2_ = bspl;
        dense.r3_ = diff - h * k7 - bspl;
        dense.r4_ = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      }
      t = dense.t1_;
      y.swap(y_new);
      k1.swap(k7);
      if (last_rejected) fac = std::min(fac, 1.0);
      last_rejected = false;
      const double h_next = h * fac;
      if (!final_step) h_ = opt_.max_step > 0.0 ? std::min(h_next, opt_.max_step) : h_next;
      h = h_ > 0.0 ? h_ : h_next;
      if (observer && !observer(dense)) return y;
    } else {
      ++rejected_;
      last_rejected = true;
      h *= std::max(fac, 0.2);
      if (h < h_min) {
        throw Error(ErrorCode::StepSizeUnderflow,
                    "step size fell below " + std::to_string(h_min) + " at t = " + std::to_string(t));
      }
    }
  }
  return y;
}

}  // namespace hagedorn
