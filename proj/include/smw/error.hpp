#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smw {

enum class ErrorCode {
  AsymmetricWeight,
  IndefiniteWeight,
  VertexOutOfRange,
  InvalidPartition,
  InvalidGraph,
  TooLarge,
  NotFound,
  DimensionMismatch,
  NumericalFailure,
  NotNonnegativeWeights,
  AssumptionViolated,
  SingularCoupling,
  DegenerateCoupling,
  ZeroTheta,
  NotContracting,
  NonFinite,
  ScheduleExhausted,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace smw
