#pragma once

#include <optional>

#include "hagedorn/grid.hpp"
#include "hagedorn/multipoly.hpp"
#include "hagedorn/symplectic.hpp"

namespace hagedorn {

inline constexpr int kDefaultAlphaMax = 32;

struct WavepacketParams {
  LagrangianFrame Z;
  RVector z;                         // phase-space center (p, q)
  double eps = 1.0;
  Complex log_prefactor{};           // added to the log of every sample
  std::optional<Complex> log_det_q;  // continuous log det Q; principal branch when empty

  WavepacketParams(LagrangianFrame frame, RVector center, double eps_);
  WavepacketParams(const NormalisedFrame& frame, RVector center, double eps_);

  int n() const noexcept { return Z.n(); }
  RVector p() const { return z.head(n()); }
  RVector q() const { return z.tail(n()); }
};

/// phi_0(Z, z; x) = (pi eps)^{-n/4} (det Q)^{-1/2}
///   exp(i/(2 eps) (x-q).B(x-q) + i/eps p.(x-q)),  B = P Q^-1.
/// Throws SingularQ, NonDecayingGaussian.
CVector eval_ground(const WavepacketParams& params, const Grid& grid);

/// phi_alpha(Z, z) = (1/sqrt(alpha!)) r_alpha(y; M) phi_0 with
/// y = sqrt(2/eps) K Q^-1 (x-q), M = Q* Q^-T conj(K), K = (1/2i) Z* Omega Z.
/// For a normalised frame K = Id and M = Q^-1 conj(Q).
CVector eval_excited(const WavepacketParams& params, const MultiIndex& alpha, const Grid& grid,
                     int alpha_max = kDefaultAlphaMax);

/// (1/sqrt(alpha!)) r_alpha(L (x-q) + c; M) phi_0 for caller-supplied L, M and offset c (empty for none).
CVector eval_polynomial_packet(const WavepacketParams& params, const CMatrix& l, const CMatrix& m,
                               const MultiIndex& alpha, const Grid& grid, const CVector& shift = {});

/// (det C)^{-1/2} with the branch fixed so that
/// eval_ground(Z C) = gauge_factor(Z, C) * eval_ground(Z) under principal
/// square roots of det Q and det(Q C).
Complex gauge_factor(const LagrangianFrame& z, const CMatrix& c);

/// <phi_beta(Z C), phi_alpha(Z)> = sqrt(alpha! beta!) / conj(det C)^{1/2}
///   sum over Lambda (row sums alpha, column sums beta) of C^Lambda / Lambda!.
/// Throws SingularC.
Complex expansion_overlap(const NormalisedFrame& z, const CMatrix& c, const MultiIndex& alpha,
                          const MultiIndex& beta, int alpha_max = kDefaultAlphaMax);

}  // namespace hagedorn
