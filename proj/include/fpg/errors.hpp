#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpg {

/// Operand sizes disagree (matrix/vector dimensions, function vs. mesh).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mesh or function is not related to another mesh in the way an operation requires.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative solver failure. Carries what the solver achieved before giving up.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double achieved_residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// CG met a direction with non-positive curvature, i.e. the matrix is not SPD.
class BreakdownError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace fpg
