#pragma once

#include <stdexcept>
#include <string>

namespace dattr {

// Bad command line, malformed config file, missing config keys.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (files, splits, labels).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Solver or training failure (non-convergence treated as fatal, sampling
// exhaustion, non-finite values).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dattr
