#pragma once

#include <stdexcept>
#include <string>

namespace charsum {

enum class ErrorCode {
  invalid_argument,
  precondition,
  not_coprime,
  budget_exceeded,
  io,
};

// Carries a machine-readable code across the C boundary; the message names
// the violated condition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::precondition, "precondition violated: " + what);
}

}  // namespace charsum
