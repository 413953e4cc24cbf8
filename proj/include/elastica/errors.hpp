#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

enum class ErrorKind {
  InvalidState,
  Domain,
  DegenerateGram,
  CertificateInvalid,
  Instability,
  Precondition,
  NoContraction,
  PresetInfeasible,
  Manifest,
  Constraint,
  Io,
};

/// Every failure raised by the library carries a kind so that callers
/// (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// 2 manifest error, 3 numerical failure, 4 I/O error.
int exit_code(ErrorKind kind) noexcept;

}  // namespace elastica
