#pragma once

#include "hagedorn/hamiltonian.hpp"
#include "hagedorn/propagation.hpp"
#include "hagedorn/symplectic.hpp"

namespace hagedorn {

/// Davies-Swanson oscillator (omega0/2)(p^2 + q^2) - (i delta/2)(pq + qp).
struct SwansonParams {
  double omega0 = 1.0;
  double delta = 0.5;

  SwansonParams() = default;
  /// Throws DimensionMismatch unless omega0 > 0 and delta >= 0 are finite.
  SwansonParams(double omega0_, double delta_);

  double omega() const;
  /// ((omega0, -i delta), (-i delta, omega0))
  CMatrix matrix() const;
  QuadraticHamiltonian hamiltonian() const;
};

struct SwansonStateScalars {
  double t = 0.0;
  double n = 1.0;      // n_t > 0
  double beta = 0.0;   // log of the coherent-state norm
  Complex m{};         // recursion scalar
  CVector l;           // normalised frame S_t l0 n_t
  RMatrix G;           // symplectic metric of l
  double frame_defect = 0.0;  // |h(l, l) - 1|
};

/// l0 = (1, -i), the standard Gaussian frame used throughout the closed forms.
NormalisedFrame ds_initial_frame();

/// cos(t omega) Id + sin(t omega)/omega Omega H.
CMatrix ds_flow(const SwansonParams& params, double t);

/// (1/2 omega) arccos(-omega0^2/delta^2), or kInfinity when omega0 > delta.
double ds_positivity_time(const SwansonParams& params);

/// Closed-form scalars. Throws OutsideHorizon when n_t^-2 <= 0.
SwansonStateScalars ds_scalars(const SwansonParams& params, double t);

/// ||U(t) phi_k(l0)|| from the scaled Hermite recursion q_{k+1} = x q_k - m q_k'.
double ds_norm(const SwansonParams& params, int k, double t, int alpha_max = kDefaultAlphaMax);

}  // namespace hagedorn
