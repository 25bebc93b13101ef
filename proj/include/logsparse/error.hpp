#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logsparse {

enum class ErrorKind {
  InvalidInput,
  NotPositiveDefinite,
  DegenerateSpectrum,
  NoConvergence,
  Disconnected,
  NonRationalBasis,
  QDependentEigenvalues,
  KernelAmbiguous,
  RationalizationFailed,
  CapExceeded,
  VerificationFailed,
  SingularJacobian,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for an error kind: 1 domain, 2 usage, 3 resource caps.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace logsparse
