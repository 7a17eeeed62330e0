#pragma once

#include <stdexcept>
#include <string>

namespace polyeb {

/// Invalid input: dimension mismatch, violated precondition, malformed file.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Y(x) has no sampled point passing membership.
class EmptyParameterSetError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace polyeb
