#pragma once

#include <memory>
#include <vector>

#include "hagedorn/grid.hpp"
#include "hagedorn/multipoly.hpp"
#include "hagedorn/symplectic.hpp"

namespace hagedorn {

/// Weyl quantisation of (1/2) z.H z on a 1-D grid:
///   (1/2) H_pp P^2 + (1/2) H_qq X^2 + (1/2) H_pq (PX + XP),
/// P = -i eps D with D the periodic spectral differentiation matrix.
struct DiscretizedOperator {
  CMatrix matrix;
  Grid grid;
  double eps = 1.0;
};

/// Periodic spectral (trigonometric) differentiation matrix for the nodes of
/// `axis`, period count * spacing.
RMatrix spectral_derivative(const Axis& axis);

/// Throws UnsupportedDimension for n != 1 and NonSymmetricH.
DiscretizedOperator discretize_hamiltonian(const CMatrix& h, double eps, const Grid& grid);

struct GridOptions {
  double dt = 1e-3;
  double grid_tol = 1e-8;  // Richardson estimate per unit time, relative to the norm
  int max_halvings = 8;
  /// Crank-Nicolson runs in the span of the lowest `modes` eigenvectors of
  /// the discretised (1/2)(P^2 + X^2); 0 keeps the full grid.
  int modes = 48;
};

struct GridPropagation {
  CMatrix psi;                  // one column per initial state
  double richardson_error = 0;  // relative estimate of the returned fields
  double dt = 0;                // finest step used
  int halvings = 0;
};

/// Crank-Nicolson psi <- (Id + a H)^-1 (Id - a H) psi, a = i dt / (2 eps),
/// with a dt/2 re-run for the Richardson estimate; dt is halved until the
/// estimate is below grid_tol * max(t, 1). Returns the extrapolated fields.
/// Throws ConvergenceFailure after max_halvings.
class GridPropagator {
 public:
  GridPropagator(const DiscretizedOperator& op, GridOptions options = {});

  GridPropagation propagate(const CMatrix& psi0, double t) const;
  GridPropagation propagate(const CVector& psi0, double t) const;

  const GridOptions& options() const noexcept { return options_; }

 private:
  CMatrix run(const CMatrix& coeffs, double t, long steps) const;

  const DiscretizedOperator& op_;
  GridOptions options_;
  RMatrix basis_;   // N x K, empty on the full grid
  CMatrix reduced_; // K x K Galerkin matrix
};

/// Convenience wrapper around GridPropagator.
GridPropagation propagate_grid(const CVector& psi0, const DiscretizedOperator& op, double t,
                               const GridOptions& options = {});

/// ||Op[nu] phi_alpha - (|alpha| + n) phi_alpha|| / ||phi_alpha|| with
/// nu(z) = (z.Gz + n eps) / (2 eps) and phi_alpha built on frame_from_metric(G).
double number_operator_check(const SymplecticMetricPair& metric, double eps, const Grid& grid,
                             const MultiIndex& alpha);

}  // namespace hagedorn
