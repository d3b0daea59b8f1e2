#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcol {

enum class ErrorKind {
  OutOfRange,
  SelfLoop,
  EmptyGraph,
  Disconnected,
  TooLarge,
  BudgetExceeded,
  GuaranteeViolated,
  InvalidDecomposition,
  SizeLimit,
  CertificateFailed,
  BadParams,
  DoesNotFit,
  LocalityMismatch,
  NotHalted,
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::GuaranteeViolated: return "GuaranteeViolated";
    case ErrorKind::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::CertificateFailed: return "CertificateFailed";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::DoesNotFit: return "DoesNotFit";
    case ErrorKind::LocalityMismatch: return "LocalityMismatch";
    case ErrorKind::NotHalted: return "NotHalted";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the best bracket known when the solver ran out of budget.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(int lo, int hi, const std::string& what)
      : Error(ErrorKind::BudgetExceeded, what), lo_(lo), hi_(hi) {}

  int lower() const noexcept { return lo_; }
  int upper() const noexcept { return hi_; }

 private:
  int lo_;
  int hi_;
};

}  // namespace lcol
