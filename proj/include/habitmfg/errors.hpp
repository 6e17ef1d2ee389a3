#pragma once

#include <stdexcept>
#include <string>

namespace habitmfg {

// Malformed or inconsistent configuration input (bad key, bad value, missing field).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. wealth at or
// below the committed habit floor).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model infeasibility: the requested problem has no admissible solution
// (e.g. initial wealth cannot fund the addictive habit over the horizon).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fixed-point solve stopped without meeting its tolerance.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double residual_, int iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

}  // namespace habitmfg
