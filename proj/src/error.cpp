#include "qhelly/error.hpp"

namespace qhelly {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::SingularMap: return "SingularMap";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::EmptyInterior: return "EmptyInterior";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::VolumeInfeasible: return "VolumeInfeasible";
    case ErrorKind::NotInJohnPosition: return "NotInJohnPosition";
    case ErrorKind::DecompositionInfeasible: return "DecompositionInfeasible";
    case ErrorKind::SupportOutOfRange: return "SupportOutOfRange";
    case ErrorKind::CertificateFailed: return "CertificateFailed";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::Step3Failed: return "Step3Failed";
    case ErrorKind::WitnessContainmentFailed: return "WitnessContainmentFailed";
    case ErrorKind::NormalizationFailed: return "NormalizationFailed";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::InputError: return "InputError";
  }
  return "Unknown";
}

}  // namespace qhelly
