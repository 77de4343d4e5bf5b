#pragma once

#include <stdexcept>
#include <string>

namespace ultrashift {

enum class ErrorKind {
  FamilyMismatch,
  InvalidPath,
  DepthExceeded,
  PartitionViolation,
  NoClass,
  InvalidOutput,
  Precondition,
  Parse,
  Semantic,
  Unsupported,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::FamilyMismatch: return "family-mismatch";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::DepthExceeded: return "depth-exceeded";
    case ErrorKind::PartitionViolation: return "partition-violation";
    case ErrorKind::NoClass: return "no-class";
    case ErrorKind::InvalidOutput: return "invalid-output";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Semantic: return "semantic";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ultrashift
