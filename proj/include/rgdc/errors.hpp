#pragma once

#include <stdexcept>
#include <string>

namespace rgdc {

// Numerically degenerate solve (cycling, iteration blow-up, inconsistent
// basis). Deliberately distinct from an infeasible LP, which is a regular
// result, not an error.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a set construction cannot produce a valid object: empty or
// inconsistent constraint sets, non-terminating index loops, empty shrunk
// sets.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or incomplete scenario configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rgdc
