#pragma once

#include <stdexcept>
#include <string>

namespace cps {

enum class ErrorCode {
  kFieldMismatch,
  kSingularMatrix,
  kNotQuadraticIrrational,
  kValidation,
  kNotUnimodular,
  kNotHyperbolic,
  kUnsupportedSpectrum,
  kDegenerateScheme,
  kDimensionMismatch,
  kOutOfRadius,
  kInvalidIfs,
  kBoundExceeded,
  kCutterOverflow,
  kUnsupported,
  kNotLids,
  kParse,
  kInternal,
};

const char* error_code_name(ErrorCode code);

/// Every library failure is reported through this one exception type; the
/// code distinguishes the cases callers are expected to branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cps
