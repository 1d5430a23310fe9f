#pragma once

#include <stdexcept>
#include <string>

namespace mce {

/// Failure categories surfaced by the engine. The numeric values double as
/// CLI exit codes and C API status codes, so they must stay stable.
enum class ErrorKind : int {
  Parse = 1,
  Unanswerable = 2,
  InconsistentEvidence = 3,
  ResourceCap = 4,
  InvalidArgument = 5,
  Precondition = 6,
  Ambiguous = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mce
