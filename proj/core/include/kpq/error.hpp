#pragma once

#include <stdexcept>
#include <string>

namespace kpq {

enum class ErrorKind {
  dimension_mismatch,
  not_hermitian,
  not_normal,
  not_self_adjoint,
  no_convergence,
  domain,
  cap_exceeded,
  unsupported,
  hypothesis_violation,
  overflow,
  parse,
  config,
};

/// Error raised by every kpq routine. The kind lets callers (and the CLI
/// runner) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kpq
