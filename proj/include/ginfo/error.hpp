#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ginfo {

enum class ErrorKind {
  InvalidArgument,
  Domain,                 // SPD / positivity violated
  SingularForm,           // symplectic form not invertible
  InvalidTransform,       // singular congruence
  BoundaryIndeterminate,  // δ± undefined (δ0 = 4c²)
  SingularState,          // Δc or Δd not positive
  DegenerateSpectrum,
  SingularDarboux,
  NonNormalizable,
  InconsistentLambda,
  NormalizationFailure,
  InvalidConfig,
  SingularShift,
  Io,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::SingularForm: return "singular-form";
    case ErrorKind::InvalidTransform: return "invalid-transform";
    case ErrorKind::BoundaryIndeterminate: return "boundary-indeterminate";
    case ErrorKind::SingularState: return "singular-state";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::SingularDarboux: return "singular-darboux";
    case ErrorKind::NonNormalizable: return "non-normalizable-ansatz";
    case ErrorKind::InconsistentLambda: return "inconsistent-lambda";
    case ErrorKind::NormalizationFailure: return "normalization-failure";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::SingularShift: return "singular-shift";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ginfo
