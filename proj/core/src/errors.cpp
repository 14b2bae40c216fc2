#include "robust_merton/errors.hpp"

namespace robust_merton {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidMarket: return "invalid-market";
    case ErrorKind::InvalidProfile: return "invalid-profile";
    case ErrorKind::InvalidUncertainty: return "invalid-uncertainty";
    case ErrorKind::InvalidRadius: return "invalid-radius";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::InvalidSample: return "invalid-sample";
    case ErrorKind::SingularGeometry: return "singular-geometry";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::KernelMismatch: return "kernel-mismatch";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::DegenerateDirection: return "degenerate-direction";
  }
  return "unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension:
    case ErrorKind::InvalidMarket:
    case ErrorKind::InvalidProfile:
    case ErrorKind::InvalidUncertainty:
    case ErrorKind::InvalidRadius:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::InvalidSample:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace robust_merton
