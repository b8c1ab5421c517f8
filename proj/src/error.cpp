#include "wgs/error.hpp"

namespace wgs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NegativeEdgeWeight: return "NegativeEdgeWeight";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::TooLargeForDense: return "TooLargeForDense";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::TimeMismatch: return "TimeMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NoPhysicalRoot: return "NoPhysicalRoot";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IncompatibleGrids: return "IncompatibleGrids";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wgs
