#include "hagedorn/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hagedorn/error.hpp"

namespace hagedorn {

namespace {

int check_matrix(const CMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0 || h.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian matrix must be square with even size");
  }
  if (!h.allFinite()) throw Error(ErrorCode::DimensionMismatch, "Hamiltonian matrix has non-finite entries");
  const double scale = tolerance_scale(max_abs(h));
  if (max_abs(CMatrix(h - h.transpose())) > tol * scale) {
    throw Error(ErrorCode::NonSymmetricH, "Hamiltonian matrix is not symmetric (H != H^T)");
  }
  return static_cast<int>(h.rows() / 2);
}

CMatrix symmetrised(const CMatrix& h) { return 0.5 * (h + h.transpose()); }

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::constant(CMatrix h, double tol) {
  QuadraticHamiltonian out;
  out.kind_ = Kind::Constant;
  out.n_ = check_matrix(h, tol);
  out.tol_ = tol;
  out.data_.push_back(symmetrised(h));
  return out;
}

QuadraticHamiltonian QuadraticHamiltonian::sampled(std::vector<double> times, std::vector<CMatrix> samples,
                                                   double tol) {
  if (times.size() != samples.size() || times.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "sampled Hamiltonian needs >= 2 matching times and samples");
  }
  QuadraticHamiltonian out;
  out.kind_ = Kind::Sampled;
  out.tol_ = tol;
  for (size_t i = 0; i < times.size(); ++i) {
    const int n = check_matrix(samples[i], tol);
    if (i == 0) out.n_ = n;
    if (n != out.n_) throw Error(ErrorCode::DimensionMismatch, "sampled matrices differ in size");
    if (!std::isfinite(times[i]) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw Error(ErrorCode::DimensionMismatch, "sample times must be finite and strictly increasing");
    }
    out.data_.push_back(symmetrised(samples[i]));
  }
  out.times_ = std::move(times);
  return out;
}

QuadraticHamiltonian QuadraticHamiltonian::polynomial(std::vector<CMatrix> coefficients, double tol) {
  if (coefficients.empty()) throw Error(ErrorCode::DimensionMismatch, "polynomial Hamiltonian needs coefficients");
  QuadraticHamiltonian out;
  out.kind_ = Kind::Polynomial;
  out.tol_ = tol;
  for (size_t i = 0; i < coefficients.size(); ++i) {
    const int n = check_matrix(coefficients[i], tol);
    if (i == 0) out.n_ = n;
    if (n != out.n_) throw Error(ErrorCode::DimensionMismatch, "polynomial coefficients differ in size");
    out.data_.push_back(symmetrised(coefficients[i]));
  }
  return out;
}

QuadraticHamiltonian QuadraticHamiltonian::function(int n, std::function<CMatrix(double)> h, double tol) {
  if (n < 1 || !h) throw Error(ErrorCode::DimensionMismatch, "function Hamiltonian needs n >= 1 and a callable");
  QuadraticHamiltonian out;
  out.kind_ = Kind::Function;
  out.n_ = n;
  out.tol_ = tol;
  out.fn_ = std::move(h);
  return out;
}

CMatrix QuadraticHamiltonian::at(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return data_[0];
    case Kind::Sampled: {
      if (t < times_.front() || t > times_.back()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "time " + std::to_string(t) + " outside the sampled Hamiltonian range");
      }
      auto it = std::upper_bound(times_.begin(), times_.end(), t);
      size_t i = static_cast<size_t>(it - times_.begin());
      if (i >= times_.size()) i = times_.size() - 1;
      const double ta = times_[i - 1], tb = times_[i];
      const double w = (t - ta) / (tb - ta);
      return (1.0 - w) * data_[i - 1] + w * data_[i];
    }
    case Kind::Polynomial: {
      CMatrix h = data_.back();
      for (size_t k = data_.size() - 1; k-- > 0;) h = h * t + data_[k];
      return h;
    }
    case Kind::Function: {
      CMatrix h = fn_(t);
      if (check_matrix(h, tol_) != n_) throw Error(ErrorCode::DimensionMismatch, "H(t) changed size");
      return symmetrised(h);
    }
  }
  return {};
}

bool QuadraticHamiltonian::is_real() const {
  if (kind_ == Kind::Function) return false;
  return std::all_of(data_.begin(), data_.end(), [](const CMatrix& h) { return h.imag().isZero(0.0); });
}

std::vector<double> QuadraticHamiltonian::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  if (kind_ != Kind::Sampled) return out;
  for (double s : times_) {
    if (s > t0 && s < t1) out.push_back(s);
  }
  return out;
}

double QuadraticHamiltonian::t_min() const {
  return kind_ == Kind::Sampled ? times_.front() : -std::numeric_limits<double>::infinity();
}

double QuadraticHamiltonian::t_max() const {
  return kind_ == Kind::Sampled ? times_.back() : std::numeric_limits<double>::infinity();
}

}  // namespace hagedorn
