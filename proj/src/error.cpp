#include "logsparse/error.hpp"

namespace logsparse {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NonRationalBasis: return "NonRationalBasis";
    case ErrorKind::QDependentEigenvalues: return "QDependentEigenvalues";
    case ErrorKind::KernelAmbiguous: return "KernelAmbiguous";
    case ErrorKind::RationalizationFailed: return "RationalizationFailed";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return 2;
    case ErrorKind::CapExceeded:
    case ErrorKind::KernelAmbiguous:
      return 3;
    default:
      return 1;
  }
}

}  // namespace logsparse
