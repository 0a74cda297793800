#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace profrig {

enum class ErrorCode {
  NegativeGenus,
  NonPositiveOrder,
  FiniteOrbifold,
  Unsupported,
  SignatureMismatch,
  ModulusMismatch,
  NotUnimodular,
  PermutationNotInSigma,
  NotInvertible,
  NotLiftable,
  InvalidArgument,
  NotNonRigid,
  WitnessInvalid,
  WrongSignature,
  BudgetExceeded,
  InternalVerificationFailed,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeGenus: return "NegativeGenus";
    case ErrorCode::NonPositiveOrder: return "NonPositiveOrder";
    case ErrorCode::FiniteOrbifold: return "FiniteOrbifold";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::PermutationNotInSigma: return "PermutationNotInSigma";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotLiftable: return "NotLiftable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotNonRigid: return "NotNonRigid";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::WrongSignature: return "WrongSignature";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InternalVerificationFailed: return "InternalVerificationFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; `code()`
/// is stable and is what the CLI prints.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace profrig
