#pragma once

#include <stdexcept>
#include <string>

namespace asindy {

// Error taxonomy. Each category maps to one C API status code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad function arguments or violated call contracts.
struct DomainError : Error {
  using Error::Error;
};

// Invalid or inconsistent configuration values.
struct ConfigError : Error {
  using Error::Error;
};

// Unusable input data (too short, misaligned, non-finite, malformed files).
struct DataError : Error {
  using Error::Error;
};

// Regression solver failures (rank deficiency, inconsistent constraints).
struct SolverError : Error {
  using Error::Error;
};

// Simulation produced a non-finite state.
struct SimDivergenceError : Error {
  SimDivergenceError(const std::string& what, long step_index)
      : Error(what), step_index(step_index) {}
  long step_index;
};

// Adaptation law produced a non-finite update.
struct AdaptationDivergenceError : Error {
  AdaptationDivergenceError(const std::string& what, long step_index)
      : Error(what), step_index(step_index) {}
  long step_index;
};

// Filesystem / serialization failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace asindy
