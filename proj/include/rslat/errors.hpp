#pragma once

#include <stdexcept>
#include <string>

namespace rslat {

enum class ErrorCode {
  zero_evidence,
  empty_matrix,
  out_of_range,
  order_too_large,
  duplicate_fact,
  unknown_fact,
  illegal_condition_edit,
  unknown_disease,
  already_present,
  not_present,
  invalid_transition,
  empty_minterm_set,
  dangling_label,
  zero_mass,
  syntax_error,
  unknown_fact_ref,
  level_out_of_range,
  version_mismatch,
  corrupt_record,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::zero_evidence: return "ZeroEvidence";
    case ErrorCode::empty_matrix: return "EmptyMatrix";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::order_too_large: return "OrderTooLarge";
    case ErrorCode::duplicate_fact: return "DuplicateFact";
    case ErrorCode::unknown_fact: return "UnknownFact";
    case ErrorCode::illegal_condition_edit: return "IllegalConditionEdit";
    case ErrorCode::unknown_disease: return "UnknownDisease";
    case ErrorCode::already_present: return "AlreadyPresent";
    case ErrorCode::not_present: return "NotPresent";
    case ErrorCode::invalid_transition: return "InvalidTransition";
    case ErrorCode::empty_minterm_set: return "EmptyMintermSet";
    case ErrorCode::dangling_label: return "DanglingLabel";
    case ErrorCode::zero_mass: return "ZeroMass";
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::unknown_fact_ref: return "UnknownFactRef";
    case ErrorCode::level_out_of_range: return "LevelOutOfRange";
    case ErrorCode::version_mismatch: return "VersionMismatch";
    case ErrorCode::corrupt_record: return "CorruptRecord";
  }
  return "Error";
}

// Every domain failure is an Error carrying a code; what() is "Name: detail".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures keep the 1-based line they were found on (0 when not line-bound).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, int line, const std::string& detail)
      : Error(code, line > 0 ? "line " + std::to_string(line) + ": " + detail : detail),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace rslat
