#include "barron/error.hpp"

namespace barron {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kOrderExceeded:
      return "order-exceeded";
    case ErrorCode::kAmbiguousAtKink:
      return "ambiguous-at-kink";
    case ErrorCode::kNotIntegrable:
      return "not-integrable";
    case ErrorCode::kMissingOracle:
      return "missing-oracle";
    case ErrorCode::kIllConditioned:
      return "ill-conditioned";
    case ErrorCode::kWrongActivation:
      return "wrong-activation";
    case ErrorCode::kOutsideRadius:
      return "outside-radius";
    case ErrorCode::kSymmetryViolated:
      return "symmetry-violated";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kUnknownActivation:
      return "unknown-activation";
    case ErrorCode::kIo:
      return "io-error";
  }
  return "unknown";
}

}  // namespace barron
