#include "hagedorn/wavepacket.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hagedorn/error.hpp"

namespace hagedorn {

WavepacketParams::WavepacketParams(LagrangianFrame frame, RVector center, double eps_)
    : Z(std::move(frame)), z(std::move(center)), eps(eps_) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::DimensionMismatch, "eps must be positive and finite");
  }
  if (z.size() != 2 * Z.n()) {
    throw Error(ErrorCode::DimensionMismatch, "center must have 2n components");
  }
  if (!z.allFinite()) throw Error(ErrorCode::DimensionMismatch, "center must be finite");
}

WavepacketParams::WavepacketParams(const NormalisedFrame& frame, RVector center, double eps_)
    : WavepacketParams(frame.frame(), std::move(center), eps_) {}

namespace {

void check_grid(const WavepacketParams& params, const Grid& grid) {
  if (grid.dim() != params.n()) {
    throw Error(ErrorCode::GridMismatch, "grid dimension " + std::to_string(grid.dim()) +
                                             " does not match mode count " + std::to_string(params.n()));
  }
}

void check_alpha(const MultiIndex& alpha, int n, int alpha_max) {
  if (static_cast<int>(alpha.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match mode count");
  }
  for (int a : alpha) {
    if (a < 0) throw Error(ErrorCode::DimensionMismatch, "negative multi-index component");
  }
  if (order(alpha) > alpha_max) {
    throw Error(ErrorCode::DimensionMismatch,
                "|alpha| = " + std::to_string(order(alpha)) + " exceeds alpha_max " + std::to_string(alpha_max));
  }
}

CMatrix offsets(const WavepacketParams& params, const Grid& grid) {
  return (grid.points().colwise() - params.q()).cast<Complex>();
}

Complex principal_log_det(const CMatrix& q) { return std::log(q.determinant()); }

}  // namespace

CVector eval_ground(const WavepacketParams& params, const Grid& grid) {
  check_grid(params, grid);
  const SiegelMatrix siegel = siegel_matrix(params.Z);
  if (!siegel.positive()) {
    throw Error(ErrorCode::NonDecayingGaussian,
                "Im(P Q^-1) is not positive definite (min eigenvalue " +
                    std::to_string(siegel.min_imag_eigenvalue) + ")");
  }
  const int n = params.n();
  const double eps = params.eps;
  const Complex log_det_q = params.log_det_q.value_or(principal_log_det(params.Z.Q()));
  const Complex log_norm = -0.25 * n * std::log(std::numbers::pi * eps) - 0.5 * log_det_q + params.log_prefactor;

  const CMatrix d = offsets(params, grid);
  const CMatrix bd = siegel.B * d;
  const CVector p = params.p().cast<Complex>();
  CVector phase = d.cwiseProduct(bd).colwise().sum().transpose() * (0.5 / eps);
  phase += (p.transpose() * d).transpose() / eps;
  return (kI * phase.array() + log_norm).exp().matrix();
}

CVector eval_polynomial_packet(const WavepacketParams& params, const CMatrix& l, const CMatrix& m,
                               const MultiIndex& alpha, const Grid& grid, const CVector& shift) {
  check_alpha(alpha, params.n(), std::numeric_limits<int>::max());
  CVector ground = eval_ground(params, grid);
  if (order(alpha) == 0) return ground;
  CMatrix y = l * offsets(params, grid);
  if (shift.size() > 0) {
    if (shift.size() != params.n()) throw Error(ErrorCode::DimensionMismatch, "offset must have n entries");
    y.colwise() += shift;
  }
  const CVector r = recursion_values(m, alpha, y);
  return r.cwiseProduct(ground) / std::sqrt(factorial(alpha));
}

CVector eval_excited(const WavepacketParams& params, const MultiIndex& alpha, const Grid& grid,
                     int alpha_max) {
  check_alpha(alpha, params.n(), alpha_max);
  const CMatrix q = params.Z.Q();
  const CMatrix k = positivity_matrix(params.Z.matrix());
  const Eigen::PartialPivLU<CMatrix> lu(q);
  const CMatrix qinv = lu.inverse();
  const CMatrix l = std::sqrt(2.0 / params.eps) * k * qinv;
  CMatrix m = q.adjoint() * qinv.transpose() * k.conjugate();
  m = 0.5 * (m + m.transpose());
  return eval_polynomial_packet(params, l, m, alpha, grid);
}

Complex gauge_factor(const LagrangianFrame& z, const CMatrix& c) {
  if (c.rows() != z.n() || c.cols() != z.n()) {
    throw Error(ErrorCode::DimensionMismatch, "gauge matrix must be n x n");
  }
  const CMatrix q = z.Q();
  const Complex root_q = std::sqrt(q.determinant());
  const Complex root_qc = std::sqrt(CMatrix(q * c).determinant());
  return root_q / root_qc;
}

namespace {

// Depth-first enumeration of nonnegative integer matrices with prescribed
// row sums alpha and column sums beta, accumulating prod C_ij^L_ij / L_ij!.
class TransportSum {
 public:
  TransportSum(const CMatrix& c, const MultiIndex& alpha, const MultiIndex& beta)
      : c_(c), alpha_(alpha), remaining_(beta), n_(static_cast<int>(alpha.size())) {}

  Complex run() {
    row_left_ = alpha_.empty() ? 0 : alpha_[0];
    visit(0, 0, 1.0);
    return sum_;
  }

 private:
  void visit(int i, int j, Complex weight) {
    if (i == n_) {
      sum_ += weight;
      return;
    }
    if (j == n_ - 1) {
      // last column takes the rest of the row
      const int take = row_left_;
      if (take > remaining_[j]) return;
      remaining_[j] -= take;
      const int saved = row_left_;
      row_left_ = (i + 1 < n_) ? alpha_[i + 1] : 0;
      visit(i + 1, 0, weight * term(i, j, take));
      row_left_ = saved;
      remaining_[j] += take;
      return;
    }
    const int hi = std::min(row_left_, remaining_[j]);
    for (int take = 0; take <= hi; ++take) {
      remaining_[j] -= take;
      row_left_ -= take;
      visit(i, j + 1, weight * term(i, j, take));
      row_left_ += take;
      remaining_[j] += take;
    }
  }

  Complex term(int i, int j, int power) const {
    if (power == 0) return 1.0;
    return std::pow(c_(i, j), power) / std::tgamma(power + 1.0);
  }

  const CMatrix& c_;
  const MultiIndex& alpha_;
  MultiIndex remaining_;
  int n_;
  int row_left_ = 0;
  Complex sum_{};
};

}  // namespace

Complex expansion_overlap(const NormalisedFrame& z, const CMatrix& c, const MultiIndex& alpha,
                          const MultiIndex& beta, int alpha_max) {
  const int n = z.n();
  check_alpha(alpha, n, alpha_max);
  check_alpha(beta, n, alpha_max);
  if (c.rows() != n || c.cols() != n) throw Error(ErrorCode::DimensionMismatch, "C must be n x n");
  Eigen::JacobiSVD<CMatrix> svd(c);
  const RVector& sv = svd.singularValues();
  if (sv(n - 1) == 0.0 || sv(0) / sv(n - 1) > Tolerances{}.cond_max) {
    throw Error(ErrorCode::SingularC, "C is singular");
  }
  if (order(alpha) != order(beta)) return 0.0;
  // 1 / conj((det C)^{1/2}) = conj(gauge_factor)
  const Complex pref = std::sqrt(factorial(alpha) * factorial(beta)) * std::conj(gauge_factor(z.frame(), c));
  TransportSum sum(c, alpha, beta);
  return pref * sum.run();
}

}  // namespace hagedorn
