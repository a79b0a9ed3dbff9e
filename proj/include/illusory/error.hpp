#pragma once

#include <stdexcept>
#include <string>

namespace illusory {

enum class ErrorCode {
  kInvalidArgument,
  kGeometryMismatch,
  kNoConfigurationBoundary,
  kSolverNotConverged,
  kRangeViolation,
  kUnreadableFile,
  kUnsupportedFormat,
  kConfigurationTouchesBoundary,
  kEmptyConfiguration,
  kIoFailure,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kGeometryMismatch: return "geometry mismatch";
    case ErrorCode::kNoConfigurationBoundary: return "no configuration boundary";
    case ErrorCode::kSolverNotConverged: return "solver not converged";
    case ErrorCode::kRangeViolation: return "range violation";
    case ErrorCode::kUnreadableFile: return "unreadable file";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kConfigurationTouchesBoundary: return "configuration touches boundary";
    case ErrorCode::kEmptyConfiguration: return "empty configuration";
    case ErrorCode::kIoFailure: return "i/o failure";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace illusory
