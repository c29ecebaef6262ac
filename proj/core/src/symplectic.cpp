#include "hagedorn/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hagedorn/error.hpp"

namespace hagedorn {

RMatrix omega(int n) {
  RMatrix w = RMatrix::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = -RMatrix::Identity(n, n);
  w.bottomLeftCorner(n, n) = RMatrix::Identity(n, n);
  return w;
}

int mode_count(const CMatrix& z) {
  if (z.rows() == 0 || z.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "frame must have an even, non-zero row count, got " + std::to_string(z.rows()));
  }
  const int n = static_cast<int>(z.rows() / 2);
  if (z.cols() > n) {
    throw Error(ErrorCode::DimensionMismatch, "frame has " + std::to_string(z.cols()) +
                                                  " columns but only " + std::to_string(n) + " modes");
  }
  return n;
}

Complex hermitian_form(const CVector& z, const CVector& zp) {
  if (z.size() != zp.size() || z.size() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "hermitian_form: incompatible vectors");
  }
  const int n = static_cast<int>(z.size() / 2);
  const CVector w = omega(n).transpose().cast<Complex>() * zp;
  return 0.5 * kI * z.dot(w);  // dot() conjugates its left operand
}

CMatrix positivity_matrix(const CMatrix& z) {
  const int n = mode_count(z);
  const CMatrix k = z.adjoint() * omega(n).cast<Complex>() * z / (2.0 * kI);
  return 0.5 * (k + k.adjoint());
}

bool is_isotropic(const CMatrix& z, double tol) {
  const int n = mode_count(z);
  const double scale = tolerance_scale(max_abs(z));
  const CMatrix s = z.transpose() * omega(n).cast<Complex>() * z;
  return max_abs(s) <= tol * scale * scale;
}

bool is_normalised(const CMatrix& z, double tol) {
  const int n = mode_count(z);
  const double scale = tolerance_scale(max_abs(z));
  const CMatrix s = z.adjoint() * omega(n).cast<Complex>() * z;
  const CMatrix target = 2.0 * kI * CMatrix::Identity(z.cols(), z.cols());
  return max_abs(CMatrix(s - target)) <= tol * scale * scale;
}

LagrangianFrame::LagrangianFrame(CMatrix z, const Tolerances& tol) : z_(std::move(z)) {
  const int n = mode_count(z_);
  if (z_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "a Lagrangian frame needs exactly n columns");
  }
  if (!is_isotropic(z_, tol.frame)) {
    throw Error(ErrorCode::DimensionMismatch, "frame is not isotropic (Z^T Omega Z != 0)");
  }
  Eigen::JacobiSVD<CMatrix> svd(z_);
  const double smin = svd.singularValues()(n - 1);
  if (smin <= tol.rank * tolerance_scale(max_abs(z_))) {
    throw Error(ErrorCode::DimensionMismatch, "frame is rank deficient");
  }
}

LagrangianFrame LagrangianFrame::unchecked(CMatrix z) {
  const int n = mode_count(z);
  if (z.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "a Lagrangian frame needs exactly n columns");
  }
  return LagrangianFrame(std::move(z), Unchecked{});
}

NormalisedFrame::NormalisedFrame(CMatrix z, const Tolerances& tol)
    : frame_(std::move(z), tol) {
  if (!is_normalised(frame_.matrix(), tol.frame)) {
    throw Error(ErrorCode::NotNormalised, "frame is not normalised (Z* Omega Z != 2i Id)");
  }
}

NormalisedFrame NormalisedFrame::standard(int n) {
  CMatrix z(2 * n, n);
  z.topRows(n) = kI * CMatrix::Identity(n, n);
  z.bottomRows(n) = CMatrix::Identity(n, n);
  return NormalisedFrame(LagrangianFrame::unchecked(std::move(z)));
}

NormalisedFrame NormalisedFrame::unchecked(CMatrix z) {
  return NormalisedFrame(LagrangianFrame::unchecked(std::move(z)));
}

SymplecticMetricPair SymplecticMetricPair::from_metric(const RMatrix& g, double tol) {
  if (g.rows() != g.cols() || g.rows() == 0 || g.rows() % 2 != 0) {
    throw Error(ErrorCode::NotSymplecticMetric, "metric must be square with even size");
  }
  const int n = static_cast<int>(g.rows() / 2);
  const double scale = tolerance_scale(max_abs(g));
  if (max_abs(RMatrix(g - g.transpose())) > tol * scale) {
    throw Error(ErrorCode::NotSymplecticMetric, "metric is not symmetric");
  }
  const RMatrix w = omega(n);
  if (max_abs(RMatrix(g.transpose() * w * g - w)) > tol * scale * scale) {
    throw Error(ErrorCode::NotSymplecticMetric, "metric is not symplectic (G^T Omega G != Omega)");
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0.0) {
    throw Error(ErrorCode::NotSymplecticMetric, "metric is not positive definite");
  }
  return {g, -w * g};
}

CMatrix hermitian_inv_sqrt(const CMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "hermitian_inv_sqrt needs a square matrix");
  }
  const double scale = tolerance_scale(max_abs(a));
  if (max_abs(CMatrix(a - a.adjoint())) > tol.frame * scale) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
  }
  const CMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  const RVector& lambda = es.eigenvalues();
  if (lambda(0) <= tol.positivity * scale) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lambda(0)) + " is not positive");
  }
  const RVector inv_root = lambda.array().rsqrt();
  return es.eigenvectors() * inv_root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

NormalisedResult normalise_frame(const LagrangianFrame& z, const Tolerances& tol) {
  const CMatrix k = positivity_matrix(z.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin <= tol.positivity * tolerance_scale(max_abs(k))) {
    throw Error(ErrorCode::NotPositiveLagrangian,
                "range Z is not a positive Lagrangian (min eigenvalue " + std::to_string(lmin) + ")");
  }
  CMatrix n = hermitian_inv_sqrt(k, tol);
  CMatrix zn = z.matrix() * n;
  return {NormalisedFrame::unchecked(std::move(zn)), std::move(n)};
}

ProjectionPair projections(const NormalisedFrame& z) {
  const CMatrix wt = omega(z.n()).transpose().cast<Complex>();
  const CMatrix& m = z.matrix();
  return {0.5 * kI * m * m.adjoint() * wt, -0.5 * kI * m.conjugate() * m.transpose() * wt};
}

SiegelMatrix siegel_matrix(const LagrangianFrame& z, const Tolerances& tol) {
  const CMatrix q = z.Q();
  Eigen::JacobiSVD<CMatrix> svd(q);
  const RVector& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0 || sv(0) / smin > tol.cond_max) {
    throw Error(ErrorCode::SingularQ, "Q block is singular; the Lagrangian leaves the Siegel chart");
  }
  // B = P Q^-1, i.e. Q^T B^T = P^T
  const CMatrix bt = q.transpose().partialPivLu().solve(z.P().transpose());
  SiegelMatrix out;
  out.B = 0.5 * (bt + bt.transpose());
  const RMatrix im = out.B.imag();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (im + im.transpose()), Eigen::EigenvaluesOnly);
  out.min_imag_eigenvalue = es.eigenvalues()(0);
  return out;
}

SymplecticMetricPair metric_and_structure(const NormalisedFrame& z) {
  const RMatrix w = omega(z.n());
  const RMatrix re = (z.matrix() * z.matrix().adjoint()).real();
  RMatrix g = w.transpose() * re * w;
  g = 0.5 * (g + g.transpose());
  RMatrix j = -w * g;
  return {std::move(g), std::move(j)};
}

namespace {

struct SymplecticPair {
  double lambda;
  RVector u;
};

void fix_sign(RVector& v) {
  const double thresh = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > thresh) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

bool lex_less(const RVector& a, const RVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i) - b(i)) > 1e-12) return a(i) < b(i);
  }
  return false;
}

}  // namespace

NormalisedFrame frame_from_metric(const SymplecticMetricPair& metric, const Tolerances& tol) {
  const RMatrix& g = metric.G;
  // Re-validate: the pair may have been built field by field.
  SymplecticMetricPair::from_metric(g, tol.frame);
  const int n = static_cast<int>(g.rows() / 2);
  const RMatrix w = omega(n);

  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (g + g.transpose()));
  const RVector& lambda = es.eigenvalues();
  const RMatrix& vecs = es.eigenvectors();
  const double cluster_tol = 1e-8 * tolerance_scale(max_abs(g));

  std::vector<SymplecticPair> pairs;
  std::vector<RVector> unit_cluster;
  for (int i = 0; i < 2 * n; ++i) {
    RVector v = vecs.col(i);
    fix_sign(v);
    if (lambda(i) > 1.0 + cluster_tol) {
      pairs.push_back({lambda(i), v});
    } else if (std::abs(lambda(i) - 1.0) <= cluster_tol) {
      unit_cluster.push_back(v);
    }
  }
  if (unit_cluster.size() % 2 != 0 || pairs.size() + unit_cluster.size() / 2 != static_cast<size_t>(n)) {
    throw Error(ErrorCode::NotSymplecticMetric, "eigenvalues of G do not pair as (lambda, 1/lambda)");
  }

  // The eigenvalue-1 subspace is Omega-invariant; pick a symplectic
  // orthonormal basis (u, Omega u) inside it.
  std::vector<RVector> chosen;
  const size_t unit_pairs = unit_cluster.size() / 2;
  for (const RVector& cand : unit_cluster) {
    if (chosen.size() == 2 * unit_pairs) break;
    RVector r = cand;
    for (const RVector& c : chosen) r -= c.dot(r) * c;
    const double nr = r.norm();
    if (nr < 1e-6) continue;
    RVector u = r / nr;
    fix_sign(u);
    RVector v = w * u;
    chosen.push_back(u);
    chosen.push_back(v);
    pairs.push_back({1.0, u});
  }
  if (pairs.size() != static_cast<size_t>(n)) {
    throw Error(ErrorCode::NotSymplecticMetric, "could not build a symplectic eigenbasis of G");
  }

  std::stable_sort(pairs.begin(), pairs.end(), [&](const SymplecticPair& a, const SymplecticPair& b) {
    if (std::abs(a.lambda - b.lambda) > cluster_tol) return a.lambda > b.lambda;
    return lex_less(a.u, b.u);
  });

  CMatrix z(2 * n, n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sqrt(pairs[k].lambda);
    const RVector v = w * pairs[k].u;
    z.col(k) = (pairs[k].u / s).cast<Complex>() - kI * (s * v).cast<Complex>();
  }
  return NormalisedFrame(std::move(z), tol);
}

}  // namespace hagedorn
