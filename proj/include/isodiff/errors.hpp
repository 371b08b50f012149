#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isodiff {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton or quadrature failed to reach tolerance.
struct SolverError : std::runtime_error {
  double last_residual;
  SolverError(const std::string& msg, double res)
      : std::runtime_error(msg), last_residual(res) {}
};

// A search or scan exceeded its configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested accuracy is below what the configured grid can resolve.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Small-divisor amplification beyond the conditioning bound.
struct SmallDivisorError : std::runtime_error {
  std::vector<int> mode;
  SmallDivisorError(const std::string& msg, std::vector<int> k)
      : std::runtime_error(msg), mode(std::move(k)) {}
};

}  // namespace isodiff
