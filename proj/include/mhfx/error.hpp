#pragma once

#include <stdexcept>
#include <string>

namespace mhfx {

enum class ErrorCode {
  IdenticallyZero,
  ConstantPole,
  IntegerParameter,
  UnsupportedForm,
  MixedSignForm,
  NotNormalized,
  SingularLower,
  TruncationTooShallow,
  DenominatorZero,
  GammaPoleUnhandled,
  SchemaError,
  NormalizationError,
  InvalidArgument,
  UnknownCase,
};

const char* error_code_name(ErrorCode code);

// All failures in the core are reported through this exception; the C API
// maps the code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace mhfx
