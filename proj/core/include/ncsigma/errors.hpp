#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncsigma {

/// Default drop threshold for opt-in pruning, relative to the largest modulus.
inline constexpr double kDefaultDropRelative = 1e-16;

/// Operands carry different deformation parameters.
class CompositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (bad matrix, non-unitary input,
/// violated constraint, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative or truncated computation failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InversionError : public NumericalError {
 public:
  InversionError(const std::string& what, int iterations, double residual)
      : NumericalError(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double tail_mass)
      : NumericalError(what), tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

/// No solution of a linear constraint exists; `offending` lists the lattice
/// indices (m, n) responsible.
class InconsistentConstraint : public PreconditionError {
 public:
  InconsistentConstraint(const std::string& what, std::vector<std::pair<int, int>> offending)
      : PreconditionError(what), offending_(std::move(offending)) {}
  const std::vector<std::pair<int, int>>& offending() const { return offending_; }

 private:
  std::vector<std::pair<int, int>> offending_;
};

}  // namespace ncsigma
