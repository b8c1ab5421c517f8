#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgs {

enum class ErrorCode {
  NonSymmetricInput,
  NonPositiveMeasure,
  SelfLoop,
  NegativeEdgeWeight,
  IndexOutOfRange,
  DimensionMismatch,
  InvalidArgument,
  InvalidLabel,
  NotAntisymmetric,
  TooLargeForDense,
  NonPositiveTime,
  ToleranceNotReached,
  BoundViolation,
  NotApplicable,
  TimeMismatch,
  UnsupportedDimension,
  NoPhysicalRoot,
  NoConvergence,
  IncompatibleGrids,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this type; `code()` carries the
/// machine-readable category and `what()` a human-readable cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wgs
