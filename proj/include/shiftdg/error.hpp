#pragma once

#include <stdexcept>
#include <string>

namespace shiftdg {

enum class ErrorCode {
  NotStronglyConnected,
  InvalidWalk,
  NotEpimorphism,
  DomainMismatch,
  CodomainMismatch,
  SearchTooLarge,
  StateFiberMismatch,
  NoProjectingWalk,
  InvalidRange,
  NoAlmostProjectingWalk,
  NotDiligent,
  InvalidPartition,
  NotARefinement,
  ZeroEntry,
  NotIsomorphism,
  BaseMismatch,
  BudgetExceeded,
  Malformed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::InvalidWalk: return "InvalidWalk";
    case ErrorCode::NotEpimorphism: return "NotEpimorphism";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::CodomainMismatch: return "CodomainMismatch";
    case ErrorCode::SearchTooLarge: return "SearchTooLarge";
    case ErrorCode::StateFiberMismatch: return "StateFiberMismatch";
    case ErrorCode::NoProjectingWalk: return "NoProjectingWalk";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::NoAlmostProjectingWalk: return "NoAlmostProjectingWalk";
    case ErrorCode::NotDiligent: return "NotDiligent";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NotARefinement: return "NotARefinement";
    case ErrorCode::ZeroEntry: return "ZeroEntry";
    case ErrorCode::NotIsomorphism: return "NotIsomorphism";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Malformed: return "Malformed";
  }
  return "Unknown";
}

/// Domain error raised by library operations. Internal invariant violations
/// (which indicate a bug rather than bad input) use std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail = {}) {
  throw Error(code, detail);
}

[[noreturn]] inline void internal_bug(const std::string& what) {
  throw std::logic_error("internal invariant violated: " + what);
}

}  // namespace shiftdg
