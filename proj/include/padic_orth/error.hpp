#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padic_orth {

enum class ErrorKind {
  SingularMatrix,
  DimensionMismatch,
  ZeroVector,
  NotFullRank,
  TargetInLattice,
  ResourceExhausted,
  DependentBasis,
  DependentInput,
  NotNormalized,
  InvalidParameters,
  MalformedInput,
  VerificationFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotFullRank: return "NotFullRank";
    case ErrorKind::TargetInLattice: return "TargetInLattice";
    case ErrorKind::ResourceExhausted: return "ResourceExhausted";
    case ErrorKind::DependentBasis: return "DependentBasis";
    case ErrorKind::DependentInput: return "DependentInput";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace padic_orth
