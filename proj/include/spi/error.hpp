#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spi {

enum class ErrorCode {
  InvalidArgument,
  OverlappingIntervals,
  EmptyInterval,
  NonFinite,
  GuardExceeded,
  MoveCollision,
  NotUnitary,
  ConvergenceFailure,
  SuspectedMissedRoot,
  DeficientSpan,
  Inconsistent,
  WrongStructure,
  NotEqualLength,
  NotSpectral,
  InconsistentTheta,
  XNotInOmega,
  XPlusTNotInOmega,
  PreconditionViolated,
  NotEigenCombination,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// front ends can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spi
