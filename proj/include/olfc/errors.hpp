#pragma once

#include <stdexcept>
#include <string>

namespace olfc {

// Config parsing / validation problems. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton non-convergence and friends. CLI maps these to exit code 3.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite state during time integration. CLI maps these to exit code 3.
struct IntegrationError : std::runtime_error {
  long step_index;
  IntegrationError(const std::string& msg, long step)
      : std::runtime_error(msg), step_index(step) {}
};

}  // namespace olfc
