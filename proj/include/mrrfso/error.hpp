#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrrfso {

enum class ErrorCode {
  DomainError,
  NonConvergent,
  InvalidOrder,
  MismatchedLengths,
  DegenerateGeometry,
  RegimeMismatch,
  DegenerateDistribution,
  NumericalOverflow,
  NonPositiveBreakpoint,
  InsufficientSamples,
  OutOfRange,
  UnknownKey,
  UnitMismatch,
  MissingRequired,
  ParseError,
  InvalidSpec,
  NoInteriorMinimum,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::MismatchedLengths: return "MismatchedLengths";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::NonPositiveBreakpoint: return "NonPositiveBreakpoint";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NoInteriorMinimum: return "NoInteriorMinimum";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the experiment runner in particular) can record it per row.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace mrrfso
