#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "hagedorn/error.hpp"
#include "hagedorn/grid.hpp"
#include "hagedorn/hamiltonian.hpp"
#include "hagedorn/multipoly.hpp"
#include "hagedorn/symplectic.hpp"
#include "hagedorn/wavepacket.hpp"

namespace hagedorn {

inline constexpr double kDefaultOdeTol = 1e-10;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Everything known about the evolved packet at time t.
struct PropagatedState {
  double t = 0.0;
  double eps = 1.0;
  CMatrix S;                 // flow matrix
  NormalisedFrame Z;         // S Z0 N
  CMatrix N;                 // ((1/2i) (S Z0)* Omega (S Z0))^{-1/2}
  double beta = 0.0;         // log of the coherent-state norm, integrated
  RVector z;                 // real center (p, q)
  Complex action{};          // int (qdot . p - H(z)) with complex H
  CMatrix M;                 // (1/4) (S conj(Z0))^T G (S conj(Z0))
  CMatrix Mtilde;            // M + N Q^-1 conj(Q) conj(N)
  CVector shift;             // offset of the evolved raising operators between centers S z0 and z
  SymplecticMetricPair metric;
  Complex log_det_q{};       // continuous log det Q_t

  double symplectic_defect = 0.0;   // max |S^T Omega S - Omega|
  double min_eig_positivity = 0.0;  // smallest eigenvalue of (1/2i)(S Z0)* Omega (S Z0)
  double beta_defect = 0.0;         // |e^beta - det(N)^{1/2}| / max(1, det(N)^{1/2})

  int n() const noexcept { return Z.n(); }
  /// i action / eps + beta: log of the scalar in front of the expansion.
  Complex log_prefactor() const { return kI * action / eps + beta; }
};

struct Trajectory {
  std::vector<PropagatedState> states;
  double horizon = kInfinity;  // first loss of positivity, if inside the requested range
  bool truncated() const noexcept { return horizon != kInfinity; }
};

class PositivityLostError : public Error {
 public:
  PositivityLostError(double horizon, std::vector<PropagatedState> partial);
  double horizon() const noexcept { return horizon_; }
  const std::vector<PropagatedState>& partial() const noexcept { return partial_; }

 private:
  double horizon_;
  std::vector<PropagatedState> partial_;
};

double symplectic_defect(const CMatrix& s);

/// S solving dS/dt = Omega H(t) S, S(t0) = Id. Matrix exponential for
/// constant H, adaptive Dormand-Prince otherwise.
CMatrix flow(const QuadraticHamiltonian& h, double t0, double t1, double ode_tol = kDefaultOdeTol);

/// First time in [t0, t_max] where the smallest eigenvalue of
/// (1/2i)(S Z0)* Omega (S Z0) drops to tol.positivity, refined by bisection
/// to 1e-8; kInfinity if none.
double positivity_horizon(const NormalisedFrame& z0, const QuadraticHamiltonian& h, double t_max,
                          double ode_tol = kDefaultOdeTol, double t0 = 0.0, const Tolerances& tol = {});

/// States at each of `times` (strictly increasing, initial data at
/// times.front()). Stops before the positivity horizon and records it.
Trajectory propagate_trajectory(const NormalisedFrame& z0, const RVector& center0, const QuadraticHamiltonian& h,
                                const std::vector<double>& times, double eps, double ode_tol = kDefaultOdeTol,
                                const Tolerances& tol = {});

/// As propagate_trajectory, but throws PositivityLostError when the horizon
/// falls inside the requested times.
std::vector<PropagatedState> propagate(const NormalisedFrame& z0, const RVector& center0,
                                       const QuadraticHamiltonian& h, const std::vector<double>& times, double eps,
                                       double ode_tol = kDefaultOdeTol, const Tolerances& tol = {});

/// Integrates the Riccati equations for G and J independently, initial data
/// at times.front().
std::vector<SymplecticMetricPair> evolve_metric_riccati(const SymplecticMetricPair& g0,
                                                        const QuadraticHamiltonian& h,
                                                        const std::vector<double>& times,
                                                        double ode_tol = kDefaultOdeTol);

using MetricPath = std::function<RMatrix(double t)>;

struct CenterPath {
  std::vector<RVector> z;
  std::vector<Complex> action;
};

/// dz/dt = Omega Re H z + G^-1 Im H z together with the complex action
/// integral, initial data at times.front().
CenterPath center_dynamics(const RVector& z0, const QuadraticHamiltonian& h, const MetricPath& metric,
                           const std::vector<double>& times, double ode_tol = kDefaultOdeTol);

/// Re(S z0) + J Im(S z0).
RVector project_center(const CMatrix& s, const SymplecticMetricPair& metric, const RVector& z0);

struct HagedornExpansion {
  MultiIndex alpha;
  std::map<MultiIndex, Complex, GradedLess> coefficients;
  Complex log_prefactor{};

  /// |e^{log_prefactor}| (sum |a_k|^2)^{1/2}
  double norm() const;
};

/// U(t) phi_alpha(Z0) = e^{log_prefactor} sum_{|k| <= |alpha|} a_k phi_k(Z_t, z_t).
HagedornExpansion hagedorn_coefficients(const PropagatedState& state, const MultiIndex& alpha,
                                        int alpha_max = kDefaultAlphaMax);

/// Direct evaluation of U(t) phi_alpha(Z0) from the M-tilde recursion.
CVector evolved_state_on_grid(const PropagatedState& state, const MultiIndex& alpha, const Grid& grid,
                              int alpha_max = kDefaultAlphaMax);

/// e^{log_prefactor} sum a_k phi_k(Z_t, z_t) sampled on the grid.
CVector expansion_on_grid(const PropagatedState& state, const HagedornExpansion& expansion, const Grid& grid);

/// Wavepacket parameters of phi_k(Z_t, z_t) with the tracked det Q branch.
WavepacketParams state_params(const PropagatedState& state);

struct LadderDecomposition {
  CMatrix C;                    // (i/2) Z_t* Omega^T conj(S) Z0
  CMatrix D;                    // (i/2) Z_t* Omega^T S conj(Z0)
  double reconstruction = 0.0;  // max |conj(S) Z0 - Z_t C - conj(Z_t) conj(D)|
  double c_minus_n = 0.0;       // max |C - N|
  double m_minus_dc = 0.0;      // max |M - D^T conj(C)|
};

LadderDecomposition ladder_decomposition(const PropagatedState& state, const NormalisedFrame& z0);

}  // namespace hagedorn
