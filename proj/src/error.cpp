#include "spi/error.hpp"

namespace spi {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::GuardExceeded: return "GuardExceeded";
    case ErrorCode::MoveCollision: return "MoveCollision";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SuspectedMissedRoot: return "SuspectedMissedRoot";
    case ErrorCode::DeficientSpan: return "DeficientSpan";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::WrongStructure: return "WrongStructure";
    case ErrorCode::NotEqualLength: return "NotEqualLength";
    case ErrorCode::NotSpectral: return "NotSpectral";
    case ErrorCode::InconsistentTheta: return "InconsistentTheta";
    case ErrorCode::XNotInOmega: return "XNotInOmega";
    case ErrorCode::XPlusTNotInOmega: return "XPlusTNotInOmega";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotEigenCombination: return "NotEigenCombination";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace spi
