#include "hagedorn/oracle_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hagedorn/error.hpp"
#include "hagedorn/wavepacket.hpp"

namespace hagedorn {

RMatrix spectral_derivative(const Axis& axis) {
  const int n = axis.count;
  const double period = n * axis.spacing();
  const double k = std::numbers::pi / period;
  RMatrix d = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int m = i - j;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double arg = std::numbers::pi * m / n;
      d(i, j) = (n % 2 == 0) ? sign * k / std::tan(arg) : sign * k / std::sin(arg);
    }
  }
  return d;
}

namespace {

void require_1d(const Grid& grid) {
  if (grid.dim() != 1) {
    throw Error(ErrorCode::UnsupportedDimension,
                "grid oracle is implemented for n = 1 only, got n = " + std::to_string(grid.dim()));
  }
}

}  // namespace

DiscretizedOperator discretize_hamiltonian(const CMatrix& h, double eps, const Grid& grid) {
  require_1d(grid);
  if (h.rows() != 2 || h.cols() != 2) {
    throw Error(ErrorCode::UnsupportedDimension, "grid oracle needs a 2 x 2 Hamiltonian");
  }
  if (std::abs(h(0, 1) - h(1, 0)) > Tolerances{}.frame * tolerance_scale(max_abs(h))) {
    throw Error(ErrorCode::NonSymmetricH, "Hamiltonian matrix is not symmetric");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::DimensionMismatch, "eps must be positive");
  const Axis& axis = grid.axes()[0];
  const RMatrix d = spectral_derivative(axis);
  const CMatrix p = -kI * eps * d.cast<Complex>();
  const RVector x = grid.points().row(0).transpose();
  const Complex hpp = h(0, 0), hqq = h(1, 1), hpq = 0.5 * (h(0, 1) + h(1, 0));

  DiscretizedOperator op{CMatrix(), grid, eps};
  // P^2 = -eps^2 D^2 is real
  op.matrix = (0.5 * hpp) * (-(eps * eps) * (d * d)).cast<Complex>();
  op.matrix.diagonal() += (0.5 * hqq) * x.array().square().matrix().cast<Complex>();
  if (hpq != Complex{}) {
    // PX + XP with X diagonal: (PX)_ij = P_ij x_j, (XP)_ij = x_i P_ij
    CMatrix cross = p;
    for (Eigen::Index i = 0; i < cross.rows(); ++i) {
      for (Eigen::Index j = 0; j < cross.cols(); ++j) cross(i, j) *= x(i) + x(j);
    }
    op.matrix += (0.5 * hpq) * cross;
  }
  return op;
}

GridPropagator::GridPropagator(const DiscretizedOperator& op, GridOptions options)
    : op_(op), options_(options) {
  require_1d(op.grid);
  if (!(options_.dt > 0.0) || options_.max_halvings < 0 || options_.modes < 0) {
    throw Error(ErrorCode::DimensionMismatch, "grid options need dt > 0 and non-negative counts");
  }
  const Eigen::Index n = op.matrix.rows();
  if (options_.modes > 0 && options_.modes < n) {
    const RMatrix d = spectral_derivative(op.grid.axes()[0]);
    const RVector x = op.grid.points().row(0).transpose();
    RMatrix h0 = -0.5 * op.eps * op.eps * (d * d);
    h0.diagonal() += 0.5 * x.array().square().matrix();
    h0 = 0.5 * (h0 + h0.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h0);
    basis_ = es.eigenvectors().leftCols(options_.modes);
    reduced_ = basis_.transpose().cast<Complex>() * op.matrix * basis_.cast<Complex>();
  }
}

CMatrix GridPropagator::run(const CMatrix& coeffs, double t, long steps) const {
  const CMatrix& h = basis_.size() ? reduced_ : op_.matrix;
  const Eigen::Index m = h.rows();
  const double dt = t / static_cast<double>(steps);
  const Complex a = kI * dt / (2.0 * op_.eps);
  const CMatrix id = CMatrix::Identity(m, m);
  const CMatrix lhs = id + a * h;
  const CMatrix rhs = id - a * h;
  const CMatrix r = lhs.partialPivLu().solve(rhs);
  if (m <= 256) {
    // binary powering of the one-step map
    CMatrix out = coeffs;
    CMatrix power = r;
    long e = steps;
    while (e > 0) {
      if (e & 1) out = power * out;
      e >>= 1;
      if (e > 0) power = power * power;
    }
    return out;
  }
  CMatrix out = coeffs;
  for (long s = 0; s < steps; ++s) out = r * out;
  return out;
}

GridPropagation GridPropagator::propagate(const CMatrix& psi0, double t) const {
  if (psi0.rows() != op_.grid.size()) throw Error(ErrorCode::GridMismatch, "field size does not match the grid");
  if (t < 0.0) throw Error(ErrorCode::DimensionMismatch, "grid propagation needs t >= 0");
  GridPropagation out;
  out.dt = options_.dt;
  if (t == 0.0) {
    out.psi = psi0;
    return out;
  }
  const bool reduced = basis_.size() > 0;
  const CMatrix coeffs = reduced ? CMatrix(basis_.transpose().cast<Complex>() * psi0) : psi0;
  auto lift = [&](const CMatrix& c) { return reduced ? CMatrix(basis_.cast<Complex>() * c) : c; };

  long steps = std::max(1L, static_cast<long>(std::ceil(t / options_.dt - 1e-9)));
  CMatrix coarse = run(coeffs, t, steps);
  const double tol = options_.grid_tol * std::max(t, 1.0);
  for (int halving = 0;; ++halving) {
    CMatrix fine = run(coeffs, t, 2 * steps);
    double est = 0.0;
    for (Eigen::Index c = 0; c < fine.cols(); ++c) {
      const double scale = std::max(fine.col(c).norm(), 1e-300);
      est = std::max(est, (fine.col(c) - coarse.col(c)).norm() / (3.0 * scale));
    }
    if (est <= tol) {
      out.psi = lift((4.0 * fine - coarse) / 3.0);
      out.richardson_error = est;
      out.dt = t / static_cast<double>(2 * steps);
      out.halvings = halving;
      return out;
    }
    if (halving >= options_.max_halvings) {
      throw Error(ErrorCode::ConvergenceFailure, "Richardson estimate " + std::to_string(est) +
                                                     " above tolerance " + std::to_string(tol) + " after " +
                                                     std::to_string(halving) + " halvings");
    }
    steps *= 2;
    coarse = std::move(fine);
  }
}

GridPropagation GridPropagator::propagate(const CVector& psi0, double t) const {
  return propagate(CMatrix(psi0), t);
}

GridPropagation propagate_grid(const CVector& psi0, const DiscretizedOperator& op, double t,
                               const GridOptions& options) {
  return GridPropagator(op, options).propagate(psi0, t);
}

double number_operator_check(const SymplecticMetricPair& metric, double eps, const Grid& grid,
                             const MultiIndex& alpha) {
  require_1d(grid);
  if (metric.n() != 1) throw Error(ErrorCode::UnsupportedDimension, "number operator check needs n = 1");
  const NormalisedFrame z = frame_from_metric(metric);
  const WavepacketParams params(z, RVector::Zero(2), eps);
  const CVector phi = eval_excited(params, alpha, grid);
  const DiscretizedOperator op = discretize_hamiltonian(metric.G.cast<Complex>(), eps, grid);
  const CVector nu_phi = op.matrix * phi / eps + 0.5 * phi;
  const double eigen = order(alpha) + 1.0;
  return l2_norm(CVector(nu_phi - eigen * phi), grid) / l2_norm(phi, grid);
}

}  // namespace hagedorn
