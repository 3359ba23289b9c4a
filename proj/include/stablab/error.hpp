#pragma once

#include <stdexcept>
#include <string>

namespace stablab {

enum class ErrorKind {
  Parse,
  ModelMismatch,
  ModelData,
  Domain,
  Precondition,
  NotHnComplete,
  UniquenessViolation,
  HeartNotResolvable,
  NeedsMoreSamples,
  Diagnostic,
  Overflow,
  Refused,
  ModelTooLarge,
  Usage,
};

const char* to_string(ErrorKind kind);

/// All library failures are reported through this one exception type; the
/// kind tells callers (and the CLI exit path) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stablab
