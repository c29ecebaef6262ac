#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hagedorn {

using Complex = std::complex<double>;

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical thresholds shared by the linear algebra and propagation code.
/// Matrix-valued checks scale these by max(1, ||input||_max).
struct Tolerances {
  double frame = 1e-10;      // isotropy / normalisation / symmetry checks
  double rank = 1e-12;       // smallest singular value of a frame
  double positivity = 1e-12; // smallest eigenvalue of (1/2i) Z* Omega Z
  double cond_max = 1e12;    // condition number bound for Q blocks
};

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double tolerance_scale(double norm) { return norm > 1.0 ? norm : 1.0; }

}  // namespace hagedorn
