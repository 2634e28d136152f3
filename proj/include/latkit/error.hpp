#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latkit {

enum class ErrorCode {
  NotAPoset,
  NotALattice,
  BoundExceeded,
  CarrierMismatch,
  InvalidPartition,
  NotARetraction,
  BadDeclaration,
  UnknownGenerator,
  DepthBudgetExceeded,
  InvalidValuation,
  CarrierOverlap,
  InvalidComponent,
  SharedPartMismatch,
  NotAnIdeal,
  AmalgamModeUnsupported,
  NotIsotone,
  NotASublattice,
  ShapeMismatch,
  InvariantViolation,
  BudgetExhausted,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAPoset: return "NotAPoset";
    case ErrorCode::NotALattice: return "NotALattice";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::CarrierMismatch: return "CarrierMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NotARetraction: return "NotARetraction";
    case ErrorCode::BadDeclaration: return "BadDeclaration";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::DepthBudgetExceeded: return "DepthBudgetExceeded";
    case ErrorCode::InvalidValuation: return "InvalidValuation";
    case ErrorCode::CarrierOverlap: return "CarrierOverlap";
    case ErrorCode::InvalidComponent: return "InvalidComponent";
    case ErrorCode::SharedPartMismatch: return "SharedPartMismatch";
    case ErrorCode::NotAnIdeal: return "NotAnIdeal";
    case ErrorCode::AmalgamModeUnsupported: return "AmalgamModeUnsupported";
    case ErrorCode::NotIsotone: return "NotIsotone";
    case ErrorCode::NotASublattice: return "NotASublattice";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the contract that
/// was violated; the message carries the offending data.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace latkit
