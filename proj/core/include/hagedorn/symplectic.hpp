#pragma once

#include "hagedorn/types.hpp"

namespace hagedorn {

/// Standard symplectic matrix ((0, -Id), (Id, 0)) of size 2n x 2n.
RMatrix omega(int n);

/// Mode count n of a 2n x k candidate frame. Throws DimensionMismatch for an
/// odd row count or more than n columns.
int mode_count(const CMatrix& z);

/// Hermitian form h(z, z') = (i/2) conj(z) . Omega^T z'.
Complex hermitian_form(const CVector& z, const CVector& zp);

/// (1/2i) Z* Omega Z, Hermitian; positive definite iff range Z is a positive Lagrangian.
CMatrix positivity_matrix(const CMatrix& z);

bool is_isotropic(const CMatrix& z, double tol = Tolerances{}.frame);
bool is_normalised(const CMatrix& z, double tol = Tolerances{}.frame);

/// Isotropic 2n x n matrix of rank n. Upper block P, lower block Q.
class LagrangianFrame {
 public:
  explicit LagrangianFrame(CMatrix z, const Tolerances& tol = {});

  /// Skips the isotropy and rank checks. For frames produced by symplectic
  /// maps whose isotropy holds only up to integration error.
  static LagrangianFrame unchecked(CMatrix z);

  const CMatrix& matrix() const noexcept { return z_; }
  int n() const noexcept { return static_cast<int>(z_.cols()); }
  CMatrix P() const { return z_.topRows(n()); }
  CMatrix Q() const { return z_.bottomRows(n()); }

 private:
  struct Unchecked {};
  LagrangianFrame(CMatrix z, Unchecked) : z_(std::move(z)) {}

  CMatrix z_;
};

/// Lagrangian frame with Z* Omega Z = 2i Id.
class NormalisedFrame {
 public:
  explicit NormalisedFrame(CMatrix z, const Tolerances& tol = {});

  /// (i Id; Id): the frame of the standard Gaussian.
  static NormalisedFrame standard(int n);

  static NormalisedFrame unchecked(CMatrix z);

  const LagrangianFrame& frame() const noexcept { return frame_; }
  const CMatrix& matrix() const noexcept { return frame_.matrix(); }
  int n() const noexcept { return frame_.n(); }
  CMatrix P() const { return frame_.P(); }
  CMatrix Q() const { return frame_.Q(); }

 private:
  explicit NormalisedFrame(LagrangianFrame f) : frame_(std::move(f)) {}

  LagrangianFrame frame_;
};

/// Symplectic metric G (real symmetric positive definite, symplectic) and the
/// compatible complex structure J = -Omega G.
struct SymplecticMetricPair {
  RMatrix G;
  RMatrix J;

  int n() const noexcept { return static_cast<int>(G.rows() / 2); }

  /// Validates G and derives J. Throws NotSymplecticMetric.
  static SymplecticMetricPair from_metric(const RMatrix& g, double tol = Tolerances{}.frame);
};

/// B = P Q^-1 parametrising a Lagrangian in the Siegel chart.
struct SiegelMatrix {
  CMatrix B;
  double min_imag_eigenvalue = 0.0;

  bool positive() const noexcept { return min_imag_eigenvalue > 0.0; }
};

struct NormalisedResult {
  NormalisedFrame frame;
  CMatrix N;  // Hermitian positive definite normaliser, frame = Z N
};

/// Z N with N = ((1/2i) Z* Omega Z)^{-1/2}. Throws NotPositiveLagrangian when
/// the smallest eigenvalue of (1/2i) Z* Omega Z is at or below tol.positivity.
NormalisedResult normalise_frame(const LagrangianFrame& z, const Tolerances& tol = {});

struct ProjectionPair {
  CMatrix onto_l;     // (i/2) Z Z* Omega^T
  CMatrix onto_lbar;  // -(i/2) conj(Z) Z^T Omega^T
};

ProjectionPair projections(const NormalisedFrame& z);

/// Throws SingularQ when cond(Q) exceeds tol.cond_max.
SiegelMatrix siegel_matrix(const LagrangianFrame& z, const Tolerances& tol = {});

/// G = Omega^T Re(Z Z*) Omega, J = -Omega G.
SymplecticMetricPair metric_and_structure(const NormalisedFrame& z);

/// Normalised frame with columns u_k / sqrt(lambda_k) - i sqrt(lambda_k) v_k
/// built from the symplectic eigenbasis of G. Columns are ordered by
/// descending lambda_k >= 1; ties are ordered lexicographically on the
/// sign-fixed eigenvectors.
NormalisedFrame frame_from_metric(const SymplecticMetricPair& metric, const Tolerances& tol = {});

/// Unique Hermitian positive definite A^{-1/2}, computed from the eigen
/// decomposition of (A + A*)/2. Throws NotHermitian / NotPositiveDefinite.
CMatrix hermitian_inv_sqrt(const CMatrix& a, const Tolerances& tol = {});

}  // namespace hagedorn
