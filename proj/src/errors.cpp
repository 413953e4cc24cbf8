#include "elastica/errors.hpp"

namespace elastica {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateGram: return "degenerate-gram";
    case ErrorKind::CertificateInvalid: return "certificate-invalid";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::NoContraction: return "no-contraction";
    case ErrorKind::PresetInfeasible: return "preset-infeasible";
    case ErrorKind::Manifest: return "manifest";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Manifest:
    case ErrorKind::Constraint:
    case ErrorKind::PresetInfeasible:
      return 2;
    case ErrorKind::Io:
      return 4;
    default:
      return 3;
  }
}

}  // namespace elastica
