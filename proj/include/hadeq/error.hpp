#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hadeq {

enum class ErrorCode {
  kContractViolation,  // mismatched space kind, out-of-range parameter
  kUnsupported,        // operation not defined for this space kind
  kInvalidSet,         // empty or malformed convex set description
  kEmptyInput,
  kInvalidSchedule,
  kNoStrategy,      // no resolvent strategy matches the bifunction hints
  kInnerDiverged,   // inner solver hit max_inner or failed its residual check
  kLambdaTooSmall,  // lambda <= declared undermonotonicity constant
  kParse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hadeq
