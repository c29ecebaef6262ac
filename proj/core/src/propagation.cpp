#include "hagedorn/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "hagedorn/ode.hpp"

namespace hagedorn {

PositivityLostError::PositivityLostError(double horizon, std::vector<PropagatedState> partial)
    : Error(ErrorCode::PositivityLost,
            "positive Lagrangian lost at t = " + std::to_string(horizon) + "; propagation halted"),
      horizon_(horizon),
      partial_(std::move(partial)) {}

double symplectic_defect(const CMatrix& s) {
  const int n = static_cast<int>(s.rows() / 2);
  const CMatrix w = omega(n).cast<Complex>();
  return max_abs(CMatrix(s.transpose() * w * s - w));
}

namespace {

OdeOptions ode_options(double ode_tol) {
  OdeOptions o;
  o.rtol = ode_tol;
  o.atol = ode_tol;
  return o;
}

void check_times(const std::vector<double>& times, const QuadraticHamiltonian& h) {
  if (times.empty()) throw Error(ErrorCode::DimensionMismatch, "no output times");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw Error(ErrorCode::DimensionMismatch, "output times must be finite and strictly increasing");
    }
  }
  if (times.front() < h.t_min() || times.back() > h.t_max()) {
    throw Error(ErrorCode::DimensionMismatch, "output times leave the Hamiltonian's time range");
  }
}

CMatrix generator(const QuadraticHamiltonian& h, double t) {
  return omega(h.n()).cast<Complex>() * h.at(t);
}

CMatrix unvec(const CVector& y, Eigen::Index offset, int rows, int cols) {
  return Eigen::Map<const CMatrix>(y.data() + offset, rows, cols);
}

// Integrates across the Hamiltonian's breakpoints so that no step straddles one.
CVector integrate_piecewise(Dopri5& ode, const QuadraticHamiltonian& h, double t0, double t1, CVector y,
                            const Dopri5::Observer& observer = {}) {
  double t = t0;
  bool stop = false;
  auto wrapped = [&](const DenseStep& step) {
    if (observer && !observer(step)) {
      stop = true;
      return false;
    }
    return true;
  };
  for (double b : h.breakpoints(t0, t1)) {
    y = ode.integrate(t, b, std::move(y), wrapped);
    if (stop) return y;
    t = b;
  }
  return ode.integrate(t, t1, std::move(y), wrapped);
}

double min_positivity_eigenvalue(const CMatrix& w) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(positivity_matrix(w), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

CMatrix flow(const QuadraticHamiltonian& h, double t0, double t1, double ode_tol) {
  if (t1 < t0) throw Error(ErrorCode::DimensionMismatch, "flow needs t1 >= t0");
  const int d = 2 * h.n();
  if (t1 == t0) return CMatrix::Identity(d, d);
  if (h.is_constant()) return CMatrix((t1 - t0) * generator(h, t0)).exp();
  Dopri5 ode(
      [&h, d](double t, const CVector& y, CVector& dy) {
        const CMatrix s = unvec(y, 0, d, d);
        const CMatrix ds = generator(h, t) * s;
        dy = Eigen::Map<const CVector>(ds.data(), ds.size());
      },
      ode_options(ode_tol));
  CMatrix id = CMatrix::Identity(d, d);
  CVector y = Eigen::Map<const CVector>(id.data(), id.size());
  y = integrate_piecewise(ode, h, t0, t1, std::move(y));
  return unvec(y, 0, d, d);
}

double positivity_horizon(const NormalisedFrame& z0, const QuadraticHamiltonian& h, double t_max, double ode_tol,
                          double t0, const Tolerances& tol) {
  if (t_max <= t0) return kInfinity;
  const int d = 2 * h.n();
  if (z0.n() != h.n()) throw Error(ErrorCode::DimensionMismatch, "frame and Hamiltonian differ in mode count");
  const CMatrix gen0 = h.is_constant() ? generator(h, t0) : CMatrix();
  auto lambda_at = [&](double t, const CMatrix& s_dense) {
    const CMatrix s = h.is_constant() ? CMatrix(((t - t0) * gen0).exp()) : s_dense;
    return min_positivity_eigenvalue(s * z0.matrix());
  };
  if (min_positivity_eigenvalue(z0.matrix()) <= tol.positivity) return t0;

  OdeOptions opt = ode_options(ode_tol);
  opt.max_step = (t_max - t0) / 64.0;
  Dopri5 ode(
      [&h, d](double t, const CVector& y, CVector& dy) {
        const CMatrix s = unvec(y, 0, d, d);
        const CMatrix ds = generator(h, t) * s;
        dy = Eigen::Map<const CVector>(ds.data(), ds.size());
      },
      opt);
  CMatrix id = CMatrix::Identity(d, d);
  CVector y = Eigen::Map<const CVector>(id.data(), id.size());

  double horizon = kInfinity;
  auto observer = [&](const DenseStep& step) {
    const double lam1 = lambda_at(step.t1(), unvec(step.y1(), 0, d, d));
    if (lam1 > tol.positivity) return true;
    double lo = step.t0(), hi = step.t1();
    while (hi - lo > 1e-8 * std::max(1.0, std::abs(hi)) * 0.5) {
      const double mid = 0.5 * (lo + hi);
      const double lam = lambda_at(mid, unvec(step(mid), 0, d, d));
      (lam > tol.positivity ? lo : hi) = mid;
    }
    horizon = 0.5 * (lo + hi);
    return false;
  };
  integrate_piecewise(ode, h, t0, t_max, std::move(y), observer);
  return horizon;
}

namespace {

// Augmented state: [vec(S) (general H only), beta, z (2n), action, log det Q_W].
struct Layout {
  int n;
  bool with_s;
  Eigen::Index s_size() const { return with_s ? 4 * n * n : 0; }
  Eigen::Index beta() const { return s_size(); }
  Eigen::Index z() const { return beta() + 1; }
  Eigen::Index action() const { return z() + 2 * n; }
  Eigen::Index logdet() const { return action() + 1; }
  Eigen::Index size() const { return logdet() + 1; }
};

struct Derivatives {
  double beta_dot;
  RVector z_dot;
  Complex action_dot;
  Complex logdet_dot;
};

Derivatives packet_rhs(const CMatrix& h, const CMatrix& s, const CMatrix& z0, const RVector& z) {
  const int n = static_cast<int>(z0.cols());
  const RMatrix w = omega(n);
  const CMatrix wmat = s * z0;
  const CMatrix k = positivity_matrix(wmat);
  const CMatrix kinv = k.ldlt().solve(CMatrix::Identity(n, n));
  const RMatrix ginv = (wmat * kinv * wmat.adjoint()).real();
  const RMatrix re_h = h.real();
  const RMatrix im_h = h.imag();

  Derivatives d;
  d.beta_dot = 0.25 * (ginv * im_h).trace();
  d.z_dot = w * re_h * z + ginv * im_h * z;
  const RVector p = z.head(n);
  const RVector q_dot = d.z_dot.tail(n);
  const CVector zc = z.cast<Complex>();
  d.action_dot = q_dot.dot(p) - 0.5 * (zc.transpose() * h * zc)(0);
  const CMatrix wdot = w.cast<Complex>() * h * wmat;
  const CMatrix q = wmat.bottomRows(n);
  d.logdet_dot = q.partialPivLu().solve(CMatrix(wdot.bottomRows(n))).trace();
  return d;
}

PropagatedState assemble(double t, double eps, const CMatrix& s, const NormalisedFrame& z0, const RVector& center0,
                         double beta, const RVector& center, Complex action, Complex logdet_w,
                         const Tolerances& tol) {
  const int n = z0.n();
  const CMatrix w = s * z0.matrix();
  const CMatrix k = positivity_matrix(w);
  const double lam = min_positivity_eigenvalue(w);
  CMatrix nmat = hermitian_inv_sqrt(k, tol);
  const CMatrix zt = w * nmat;
  NormalisedFrame frame = NormalisedFrame::unchecked(zt);
  SymplecticMetricPair metric = metric_and_structure(frame);
  const CMatrix sz0bar = s * z0.matrix().conjugate();
  CMatrix m = 0.25 * sz0bar.transpose() * metric.G.cast<Complex>() * sz0bar;
  const CMatrix q = zt.bottomRows(n);
  const CMatrix qinv_qbar = q.partialPivLu().solve(CMatrix(q.conjugate()));
  CMatrix mtilde = m + nmat * qinv_qbar * nmat.conjugate();
  // A^dagger(conj(S) Z0, conj(S) z0) = A^dagger(conj(S) Z0, z) + shift. Zero for real flows, where S z0 = z.
  const CVector offset = center.cast<Complex>() - s * center0.cast<Complex>();
  CVector shift = (-kI / std::sqrt(2.0 * eps)) * z0.matrix().adjoint() * s.transpose() * omega(n).cast<Complex>() * offset;
  const double det_n = nmat.determinant().real();
  const double root = std::sqrt(det_n);
  const double beta_defect = std::abs(std::exp(beta) - root) / std::max(1.0, root);

  return PropagatedState{t,
                         eps,
                         s,
                         std::move(frame),
                         std::move(nmat),
                         beta,
                         center,
                         action,
                         std::move(m),
                         std::move(mtilde),
                         std::move(shift),
                         std::move(metric),
                         logdet_w + std::log(det_n),
                         symplectic_defect(s),
                         lam,
                         beta_defect};
}

}  // namespace

Trajectory propagate_trajectory(const NormalisedFrame& z0, const RVector& center0, const QuadraticHamiltonian& h,
                                const std::vector<double>& times, double eps, double ode_tol,
                                const Tolerances& tol) {
  check_times(times, h);
  const int n = h.n();
  if (z0.n() != n) throw Error(ErrorCode::DimensionMismatch, "frame and Hamiltonian differ in mode count");
  if (center0.size() != 2 * n || !center0.allFinite()) {
    throw Error(ErrorCode::DimensionMismatch, "center must be a finite real 2n-vector");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::DimensionMismatch, "eps must be positive");

  Trajectory traj;
  const double t0 = times.front();
  traj.horizon = positivity_horizon(z0, h, times.back(), ode_tol, t0, tol);

  const int d = 2 * n;
  const Layout lay{n, !h.is_constant()};
  const CMatrix gen0 = h.is_constant() ? generator(h, t0) : CMatrix();
  const CMatrix& zmat = z0.matrix();

  auto flow_of = [&](double t, const CVector& y) -> CMatrix {
    if (h.is_constant()) return ((t - t0) * gen0).exp();
    return unvec(y, 0, d, d);
  };

  Dopri5 ode(
      [&](double t, const CVector& y, CVector& dy) {
        dy.resize(y.size());
        const CMatrix hm = h.at(t);
        const CMatrix s = flow_of(t, y);
        if (lay.with_s) {
          const CMatrix ds = omega(n).cast<Complex>() * hm * s;
          dy.head(lay.s_size()) = Eigen::Map<const CVector>(ds.data(), ds.size());
        }
        const RVector z = y.segment(lay.z(), d).real();
        const Derivatives der = packet_rhs(hm, s, zmat, z);
        dy(lay.beta()) = der.beta_dot;
        dy.segment(lay.z(), d) = der.z_dot.cast<Complex>();
        dy(lay.action()) = der.action_dot;
        dy(lay.logdet()) = der.logdet_dot;
      },
      ode_options(ode_tol));

  CVector y = CVector::Zero(lay.size());
  if (lay.with_s) {
    CMatrix id = CMatrix::Identity(d, d);
    y.head(lay.s_size()) = Eigen::Map<const CVector>(id.data(), id.size());
  }
  y.segment(lay.z(), d) = center0.cast<Complex>();
  y(lay.logdet()) = std::log(z0.Q().determinant());

  double t_prev = t0;
  for (double t : times) {
    if (t >= traj.horizon) break;
    if (t > t_prev) y = integrate_piecewise(ode, h, t_prev, t, std::move(y));
    t_prev = t;
    const CMatrix s = flow_of(t, y);
    if (min_positivity_eigenvalue(s * zmat) <= tol.positivity) {
      // Closer to the horizon than bisection resolved.
      traj.horizon = t;
      break;
    }
    traj.states.push_back(assemble(t, eps, s, z0, center0, y(lay.beta()).real(), y.segment(lay.z(), d).real(),
                                   y(lay.action()), y(lay.logdet()), tol));
  }
  return traj;
}

std::vector<PropagatedState> propagate(const NormalisedFrame& z0, const RVector& center0,
                                       const QuadraticHamiltonian& h, const std::vector<double>& times, double eps,
                                       double ode_tol, const Tolerances& tol) {
  Trajectory traj = propagate_trajectory(z0, center0, h, times, eps, ode_tol, tol);
  if (traj.truncated()) throw PositivityLostError(traj.horizon, std::move(traj.states));
  return std::move(traj.states);
}

std::vector<SymplecticMetricPair> evolve_metric_riccati(const SymplecticMetricPair& g0,
                                                        const QuadraticHamiltonian& h,
                                                        const std::vector<double>& times, double ode_tol) {
  check_times(times, h);
  const int n = h.n();
  if (g0.n() != n) throw Error(ErrorCode::DimensionMismatch, "metric and Hamiltonian differ in mode count");
  const int d = 2 * n;
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  const RMatrix w = omega(n);
  Dopri5 ode(
      [&](double t, const CVector& y, CVector& dy) {
        const CMatrix hm = h.at(t);
        const RMatrix re = hm.real(), im = hm.imag();
        const RMatrix g = unvec(y, 0, d, d).real();
        const RMatrix j = unvec(y, block, d, d).real();
        const RMatrix gdot = re * w * g - g * w * re - im - g * w * im * w * g;
        const RMatrix jdot = w * re * j - j * w * re + w * im + j * w * im * j;
        dy.resize(y.size());
        dy.head(block) = Eigen::Map<const RVector>(gdot.data(), block).cast<Complex>();
        dy.tail(block) = Eigen::Map<const RVector>(jdot.data(), block).cast<Complex>();
      },
      ode_options(ode_tol));
  CVector y(2 * block);
  y.head(block) = Eigen::Map<const RVector>(g0.G.data(), block).cast<Complex>();
  y.tail(block) = Eigen::Map<const RVector>(g0.J.data(), block).cast<Complex>();

  std::vector<SymplecticMetricPair> out;
  double t_prev = times.front();
  for (double t : times) {
    if (t > t_prev) y = integrate_piecewise(ode, h, t_prev, t, std::move(y));
    t_prev = t;
    out.push_back({unvec(y, 0, d, d).real(), unvec(y, block, d, d).real()});
  }
  return out;
}

CenterPath center_dynamics(const RVector& z0, const QuadraticHamiltonian& h, const MetricPath& metric,
                           const std::vector<double>& times, double ode_tol) {
  check_times(times, h);
  const int n = h.n();
  const int d = 2 * n;
  if (z0.size() != d) throw Error(ErrorCode::DimensionMismatch, "center must have 2n components");
  const RMatrix w = omega(n);
  Dopri5 ode(
      [&](double t, const CVector& y, CVector& dy) {
        const CMatrix hm = h.at(t);
        const RMatrix g = metric(t);
        const RMatrix ginv = g.ldlt().solve(RMatrix::Identity(d, d));
        const RVector z = y.head(d).real();
        const RVector zdot = w * hm.real() * z + ginv * hm.imag() * z;
        const CVector zc = z.cast<Complex>();
        dy.resize(y.size());
        dy.head(d) = zdot.cast<Complex>();
        dy(d) = zdot.tail(n).dot(z.head(n)) - 0.5 * (zc.transpose() * hm * zc)(0);
      },
      ode_options(ode_tol));
  CVector y = CVector::Zero(d + 1);
  y.head(d) = z0.cast<Complex>();
  CenterPath out;
  double t_prev = times.front();
  for (double t : times) {
    if (t > t_prev) y = integrate_piecewise(ode, h, t_prev, t, std::move(y));
    t_prev = t;
    out.z.push_back(y.head(d).real());
    out.action.push_back(y(d));
  }
  return out;
}

RVector project_center(const CMatrix& s, const SymplecticMetricPair& metric, const RVector& z0) {
  const CVector sz = s * z0.cast<Complex>();
  return sz.real() + metric.J * sz.imag();
}

double HagedornExpansion::norm() const {
  double sum = 0.0;
  for (const auto& term : coefficients) sum += std::norm(term.second);
  return std::exp(log_prefactor.real()) * std::sqrt(sum);
}

HagedornExpansion hagedorn_coefficients(const PropagatedState& state, const MultiIndex& alpha, int alpha_max) {
  if (static_cast<int>(alpha.size()) != state.n()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match mode count");
  }
  if (order(alpha) > alpha_max) {
    throw Error(ErrorCode::DimensionMismatch, "|alpha| exceeds alpha_max");
  }
  const MultiPoly q = poly_recursion(state.M, alpha);
  const MultiPoly qn = q.substitute_affine(state.N, state.shift);
  HagedornExpansion out;
  out.alpha = alpha;
  out.log_prefactor = state.log_prefactor();
  const double root_alpha = std::sqrt(factorial(alpha));
  for (const auto& [k, c] : qn.terms()) {
    out.coefficients[k] = c * std::sqrt(factorial(k)) / root_alpha;
  }
  return out;
}

WavepacketParams state_params(const PropagatedState& state) {
  WavepacketParams params(state.Z, state.z, state.eps);
  params.log_det_q = state.log_det_q;
  params.log_prefactor = state.log_prefactor();
  return params;
}

CVector evolved_state_on_grid(const PropagatedState& state, const MultiIndex& alpha, const Grid& grid,
                              int alpha_max) {
  if (static_cast<int>(alpha.size()) != state.n() || order(alpha) > alpha_max) {
    throw Error(ErrorCode::DimensionMismatch, "bad multi-index for this state");
  }
  const WavepacketParams params = state_params(state);
  const CMatrix q = state.Z.Q();
  const CMatrix l = std::sqrt(2.0 / state.eps) * state.N * q.partialPivLu().inverse();
  return eval_polynomial_packet(params, l, state.Mtilde, alpha, grid, state.shift);
}

CVector expansion_on_grid(const PropagatedState& state, const HagedornExpansion& expansion, const Grid& grid) {
  WavepacketParams params = state_params(state);
  params.log_prefactor = expansion.log_prefactor;
  CVector sum = CVector::Zero(grid.size());
  for (const auto& [k, a] : expansion.coefficients) sum += a * eval_excited(params, k, grid);
  return sum;
}

LadderDecomposition ladder_decomposition(const PropagatedState& state, const NormalisedFrame& z0) {
  const CMatrix wt = omega(state.n()).transpose().cast<Complex>();
  const CMatrix& zt = state.Z.matrix();
  const CMatrix sbar_z0 = state.S.conjugate() * z0.matrix();
  const CMatrix s_z0bar = state.S * z0.matrix().conjugate();
  LadderDecomposition out;
  out.C = 0.5 * kI * zt.adjoint() * wt * sbar_z0;
  out.D = 0.5 * kI * zt.adjoint() * wt * s_z0bar;
  out.reconstruction = max_abs(CMatrix(sbar_z0 - zt * out.C - zt.conjugate() * out.D.conjugate()));
  out.c_minus_n = max_abs(CMatrix(out.C - state.N));
  out.m_minus_dc = max_abs(CMatrix(state.M - out.D.transpose() * out.C.conjugate()));
  return out;
}

}  // namespace hagedorn
