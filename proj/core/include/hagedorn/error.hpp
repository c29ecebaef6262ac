#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hagedorn {

enum class ErrorCode {
  DimensionMismatch,
  NotNormalised,
  NotPositiveLagrangian,
  SingularQ,
  SingularC,
  NotSymplecticMetric,
  NotHermitian,
  NotPositiveDefinite,
  NonDecayingGaussian,
  AsymmetricM,
  NonSymmetricH,
  StepSizeUnderflow,
  PositivityLost,
  OutsideHorizon,
  UnsupportedDimension,
  ConvergenceFailure,
  GridMismatch,
  ConfigError,
  BadTimeGrid,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hagedorn
