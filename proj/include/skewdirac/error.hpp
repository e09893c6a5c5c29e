#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewdirac {

/// Failure categories reported by the library. Every throwing operation
/// raises skewdirac::Error carrying one of these codes.
enum class ErrorCode {
  NonSquare,
  DimensionMismatch,
  UnsupportedGenerator,
  NotHermitian,
  NotPositive,
  NotUnitary,
  SingularDenominator,
  InvalidBeta,
  InvalidSystem,
  LambdaZero,
  PoleInput,
  NumericBreakdown,
  ResolventSingular,
  NotAWeylFunction,
  IllConditioned,
  SingularSchurComplement,
  HalfPlaneViolation,
  StepSizeTooCoarse,
  TruncationBudgetExceeded,
  WrongBlockSize,
  Validation,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace skewdirac
