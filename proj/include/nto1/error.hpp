#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nto1 {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  DegreeMismatch,
  DivisionByZero,
  FieldMismatch,
  ZeroInput,
  FieldTooLarge,
  ConstantPolynomial,
  DomainTooLarge,
  DegreeTooHigh,
  WrongCharacteristic,
  SetTooLarge,
  HypothesesNotVerified,
  HypothesisViolated,
  SingularVandermonde,
  ParseError,
  GateExceeded,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::ConstantPolynomial: return "ConstantPolynomial";
    case ErrorKind::DomainTooLarge: return "DomainTooLarge";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::WrongCharacteristic: return "WrongCharacteristic";
    case ErrorKind::SetTooLarge: return "SetTooLarge";
    case ErrorKind::HypothesesNotVerified: return "HypothesesNotVerified";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::SingularVandermonde: return "SingularVandermonde";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GateExceeded: return "GateExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this type; `kind()` is the
/// stable discriminator, `what()` carries a human-readable witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace nto1
