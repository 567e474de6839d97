#include "mhfseg/error.hpp"

namespace mhfseg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroSignal: return "ZeroSignal";
    case ErrorKind::SignalTooShort: return "SignalTooShort";
    case ErrorKind::NonPowerOfTwoLength: return "NonPowerOfTwoLength";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::IndexOutOfValidRange: return "IndexOutOfValidRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TooFewFrames: return "TooFewFrames";
    case ErrorKind::NonDescendingThresholds: return "NonDescendingThresholds";
  }
  return "Unknown";
}

}  // namespace mhfseg
