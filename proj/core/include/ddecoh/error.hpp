#pragma once

#include <stdexcept>
#include <string>

namespace ddecoh {

/// Failure categories surfaced by the numerical modules. The CLI maps
/// `Config` to exit code 2 and everything else to exit code 3.
enum class ErrorKind {
  Config,
  QuadratureFailure,
  TooCloseToBandEdge,
  StepTooLarge,
  KernelCoverage,
  WindowOutOfRange,
  GridMismatch,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ddecoh
