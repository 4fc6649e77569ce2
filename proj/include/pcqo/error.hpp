#pragma once

#include <stdexcept>
#include <string>

namespace pcqo {

enum class ErrorCode {
  InvalidCutoff,
  ContractViolation,
  DimensionMismatch,
  NumericContract,
  DegeneratePool,
  NoRealizableAnsatz,
  NotDecomposable,
  SearchSpaceTooLarge,
  InvalidProblem,
  Config,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCutoff: return "invalid-cutoff";
    case ErrorCode::ContractViolation: return "contract-violation";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NumericContract: return "numeric-contract";
    case ErrorCode::DegeneratePool: return "degenerate-pool";
    case ErrorCode::NoRealizableAnsatz: return "no-realizable-ansatz";
    case ErrorCode::NotDecomposable: return "not-decomposable";
    case ErrorCode::SearchSpaceTooLarge: return "search-space-too-large";
    case ErrorCode::InvalidProblem: return "invalid-problem";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcqo
