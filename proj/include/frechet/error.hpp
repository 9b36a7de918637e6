#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frechet {

enum class ErrorCode {
  NotSymmetric,
  NotPositiveDefinite,
  NonFinite,
  EigenFailure,
  DimMismatch,
  AtReferencePoint,
  DegenerateRefs,
  NoSolution,
  RefTouchesSet,
  TooFewPoints,
  InvalidArgument,
  RetriesExhausted,
  LabelOutOfRange,
  ParseError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::AtReferencePoint: return "AtReferencePoint";
    case ErrorCode::DegenerateRefs: return "DegenerateRefs";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::RefTouchesSet: return "RefTouchesSet";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace frechet
