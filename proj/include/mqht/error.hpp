#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mqht {

enum class ErrorKind {
  HermiticityViolation,
  PSDViolation,
  TraceViolation,
  NormalizationViolation,
  DegenerateInput,
  DimensionMismatch,
  DimensionCapExceeded,
  SplitTooSmall,
  PartialsExceedIdentity,
  PartialsEqualIdentity,
  DistinctnessViolation,
  Undefined,
  CalibrationFailed,
  InvalidArgument,
  ConsistencyViolation,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HermiticityViolation: return "HermiticityViolation";
    case ErrorKind::PSDViolation: return "PSDViolation";
    case ErrorKind::TraceViolation: return "TraceViolation";
    case ErrorKind::NormalizationViolation: return "NormalizationViolation";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorKind::SplitTooSmall: return "SplitTooSmall";
    case ErrorKind::PartialsExceedIdentity: return "PartialsExceedIdentity";
    case ErrorKind::PartialsEqualIdentity: return "PartialsEqualIdentity";
    case ErrorKind::DistinctnessViolation: return "DistinctnessViolation";
    case ErrorKind::Undefined: return "Undefined";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mqht
