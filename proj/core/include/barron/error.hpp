#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace barron {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kOrderExceeded,
  kAmbiguousAtKink,
  kNotIntegrable,
  kMissingOracle,
  kIllConditioned,
  kWrongActivation,
  kOutsideRadius,
  kSymmetryViolated,
  kNonConvergence,
  kParse,
  kUnknownActivation,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the category without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace barron
