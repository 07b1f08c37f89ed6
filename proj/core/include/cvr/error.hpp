#pragma once

#include <stdexcept>
#include <string>

namespace cvr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent road network / demand input.
class NetworkError : public Error {
 public:
  using Error::Error;
};

/// Scenario or matrix configuration rejected during loading.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a simulation operation was violated.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvr
