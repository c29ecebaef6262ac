#include "hagedorn/error.hpp"

namespace hagedorn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNormalised: return "NotNormalised";
    case ErrorCode::NotPositiveLagrangian: return "NotPositiveLagrangian";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::SingularC: return "SingularC";
    case ErrorCode::NotSymplecticMetric: return "NotSymplecticMetric";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonDecayingGaussian: return "NonDecayingGaussian";
    case ErrorCode::AsymmetricM: return "AsymmetricM";
    case ErrorCode::NonSymmetricH: return "NonSymmetricH";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::OutsideHorizon: return "OutsideHorizon";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BadTimeGrid: return "BadTimeGrid";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hagedorn
