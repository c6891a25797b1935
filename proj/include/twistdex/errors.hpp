#pragma once

#include <stdexcept>
#include <string>

namespace twistdex {

// Signal codes carried by every library exception. Code names are stable and
// appear verbatim in CLI reports and in the C API's last-error string.
enum class ErrorCode {
  InvalidArgument,
  DomainError,
  ParseError,
  Io,
  RequiresInvertible,
  NotIdempotent,
  InvalidConformalFactor,
  NoRibbonStructure,
  RibbonConstructionFailure,
  OutsideSpan,
  InvalidConnection,
  InvalidFamily,
  ContractViolation,
  NumericFailure,
  Internal,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace twistdex
