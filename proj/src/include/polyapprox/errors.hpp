#pragma once

#include <stdexcept>
#include <string>

namespace polyapprox {

enum class ErrorCode {
  InvalidArgument,
  UnboundedBody,
  ConvergenceFailure,
  DensityViolation,
  InsufficientHits,
  BoundViolation,
  VertexEnumerationOverflow,
  ParameterBelowThreshold,
  DegenerateBody,
  InvalidIndexPair,
  ThresholdNotMet,
  RetryExhausted,
  UnboundedCircumscription,
  ContainmentViolation,
  Infeasible,
  Unbounded,
  Unsupported,
  ParseError,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole library; tests dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnboundedBody: return "UnboundedBody";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DensityViolation: return "DensityViolation";
    case ErrorCode::InsufficientHits: return "InsufficientHits";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::VertexEnumerationOverflow: return "VertexEnumerationOverflow";
    case ErrorCode::ParameterBelowThreshold: return "ParameterBelowThreshold";
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::InvalidIndexPair: return "InvalidIndexPair";
    case ErrorCode::ThresholdNotMet: return "ThresholdNotMet";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::UnboundedCircumscription: return "UnboundedCircumscription";
    case ErrorCode::ContainmentViolation: return "ContainmentViolation";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace polyapprox
