#include "skewdirac/error.hpp"

namespace skewdirac {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedGenerator: return "UnsupportedGenerator";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::LambdaZero: return "LambdaZero";
    case ErrorCode::PoleInput: return "PoleInput";
    case ErrorCode::NumericBreakdown: return "NumericBreakdown";
    case ErrorCode::ResolventSingular: return "ResolventSingular";
    case ErrorCode::NotAWeylFunction: return "NotAWeylFunction";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SingularSchurComplement: return "SingularSchurComplement";
    case ErrorCode::HalfPlaneViolation: return "HalfPlaneViolation";
    case ErrorCode::StepSizeTooCoarse: return "StepSizeTooCoarse";
    case ErrorCode::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorCode::WrongBlockSize: return "WrongBlockSize";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

}  // namespace skewdirac
