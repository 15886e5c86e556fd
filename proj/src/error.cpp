#include "lwgas/error.hpp"

namespace lwgas {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kModulusMismatch: return "modulus-mismatch";
    case ErrorKind::kZeroInverse: return "zero-inverse";
    case ErrorKind::kDuplicateX: return "duplicate-x";
    case ErrorKind::kBelowThreshold: return "below-threshold";
    case ErrorKind::kOffCurve: return "off-curve";
    case ErrorKind::kSingularCurve: return "singular-curve";
    case ErrorKind::kTooLarge: return "too-large";
    case ErrorKind::kUnknownMember: return "unknown-member";
    case ErrorKind::kInfinityPoint: return "infinity-point";
    case ErrorKind::kDecode: return "decode";
    case ErrorKind::kTagFailure: return "tag-failure";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace lwgas
