#include "hagedorn/swanson.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hagedorn/error.hpp"

namespace hagedorn {

SwansonParams::SwansonParams(double omega0_, double delta_) : omega0(omega0_), delta(delta_) {
  if (!std::isfinite(omega0) || !std::isfinite(delta) || !(omega0 > 0.0) || delta < 0.0) {
    throw Error(ErrorCode::DimensionMismatch, "Davies-Swanson parameters need omega0 > 0, delta >= 0");
  }
}

double SwansonParams::omega() const { return std::hypot(omega0, delta); }

CMatrix SwansonParams::matrix() const {
  CMatrix h(2, 2);
  h << omega0, -kI * delta, -kI * delta, omega0;
  return h;
}

QuadraticHamiltonian SwansonParams::hamiltonian() const { return QuadraticHamiltonian::constant(matrix()); }

NormalisedFrame ds_initial_frame() {
  CMatrix l0(2, 1);
  l0 << 1.0, -kI;
  return NormalisedFrame(std::move(l0));
}

CMatrix ds_flow(const SwansonParams& params, double t) {
  const double w = params.omega();
  const CMatrix gen = omega(1).cast<Complex>() * params.matrix();
  return std::cos(t * w) * CMatrix::Identity(2, 2) + (std::sin(t * w) / w) * gen;
}

double ds_positivity_time(const SwansonParams& params) {
  if (params.omega0 > params.delta) return kInfinity;
  const double ratio = params.omega0 * params.omega0 / (params.delta * params.delta);
  return std::acos(-ratio) / (2.0 * params.omega());
}

SwansonStateScalars ds_scalars(const SwansonParams& params, double t) {
  const double horizon = ds_positivity_time(params);
  if (std::abs(t) >= horizon) {
    throw Error(ErrorCode::OutsideHorizon,
                "t = " + std::to_string(t) + " is outside the positivity horizon " + std::to_string(horizon));
  }
  const double w = params.omega();
  const double d = params.delta;
  const double w0 = params.omega0;
  const double n_inv2 = 1.0 - (d * d) / (w * w) * (1.0 - std::cos(2.0 * t * w));
  if (!(n_inv2 > 0.0)) {
    throw Error(ErrorCode::OutsideHorizon, "n_t^-2 is not positive at t = " + std::to_string(t));
  }
  SwansonStateScalars out;
  out.t = t;
  out.n = 1.0 / std::sqrt(n_inv2);
  out.beta = 0.5 * std::log(w) - 0.25 * std::log(w0 * w0 + d * d * std::cos(2.0 * w * t));
  const double s = std::sin(w * t), c = std::cos(w * t);
  out.m = (2.0 * d / w) * out.n * out.n * s * Complex(w0 / w * s, c);
  out.l = ds_flow(params, t) * ds_initial_frame().matrix().col(0) * out.n;
  const CMatrix lm = out.l;
  out.G = metric_and_structure(NormalisedFrame::unchecked(lm)).G;
  out.frame_defect = std::abs(hermitian_form(out.l, out.l) - 1.0);
  return out;
}

namespace {

using LComplex = std::complex<long double>;

long double pairwise_sum(const std::vector<long double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 4) {
    long double s = 0.0L;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

double ds_norm(const SwansonParams& params, int k, double t, int alpha_max) {
  if (k < 0 || k > alpha_max) {
    throw Error(ErrorCode::DimensionMismatch, "k = " + std::to_string(k) + " outside [0, alpha_max]");
  }
  const SwansonStateScalars sc = ds_scalars(params, t);
  const LComplex m(sc.m.real(), sc.m.imag());
  // coefficients of q_j in the monomial basis, q_{j+1} = x q_j - m q_j'
  std::vector<LComplex> q{LComplex(1.0L)};
  for (int j = 0; j < k; ++j) {
    std::vector<LComplex> next(q.size() + 1, LComplex(0.0L));
    for (size_t i = 0; i < q.size(); ++i) next[i + 1] += q[i];
    for (size_t i = 1; i < q.size(); ++i) next[i - 1] -= m * static_cast<long double>(i) * q[i];
    q.swap(next);
  }
  const long double n2 = static_cast<long double>(sc.n) * sc.n;
  std::vector<long double> terms(k + 1, 0.0L);
  for (int j = k; j >= 0; --j) {
    // j!/k! as a product of reciprocals
    long double ratio = 1.0L;
    for (int i = j + 1; i <= k; ++i) ratio /= static_cast<long double>(i);
    terms[j] = ratio * std::norm(q[j]) * std::pow(n2, static_cast<long double>(j));
  }
  const long double sum = pairwise_sum(terms, 0, terms.size());
  return static_cast<double>(std::exp(static_cast<long double>(sc.beta)) * std::sqrt(sum));
}

}  // namespace hagedorn
