#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhelly {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  ZeroDirection,
  SingularMap,
  Unbounded,
  EmptyInterior,
  MaxIterations,
  VolumeInfeasible,
  NotInJohnPosition,
  DecompositionInfeasible,
  SupportOutOfRange,
  CertificateFailed,
  HypothesisViolated,
  Step3Failed,
  WitnessContainmentFailed,
  NormalizationFailed,
  NoWitness,
  InputError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace qhelly
