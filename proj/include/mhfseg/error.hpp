#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mhfseg {

enum class ErrorKind {
  NotFound,
  UnsupportedFormat,
  IoError,
  InvalidSpec,
  InvalidArgument,
  ZeroSignal,
  SignalTooShort,
  NonPowerOfTwoLength,
  OrderTooLarge,
  NumericalBreakdown,
  LengthMismatch,
  ZeroVector,
  IndexOutOfValidRange,
  EmptyInput,
  TooFewFrames,
  NonDescendingThresholds,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace mhfseg
