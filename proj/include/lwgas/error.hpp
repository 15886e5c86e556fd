#pragma once

#include <stdexcept>
#include <string>

namespace lwgas {

enum class ErrorKind {
  kInvalidArgument,
  kModulusMismatch,
  kZeroInverse,
  kDuplicateX,
  kBelowThreshold,
  kOffCurve,
  kSingularCurve,
  kTooLarge,
  kUnknownMember,
  kInfinityPoint,
  kDecode,
  kTagFailure,
  kIo,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lwgas
