#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levyif {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric or structural input to an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Violation found while parsing or validating a config document.
/// Messages are path-qualified, e.g. "network.symmetric.H[1]: ...".
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A linear system turned out singular (pivot below threshold).
class RankError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a hard enumeration cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A statistical check was invoked on a configuration that does not
/// satisfy its declared entry condition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Runtime diagnostic from a simulation, e.g. the spike explosion guard.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t neuron)
      : Error(what), neuron_(neuron) {}
  std::size_t neuron() const noexcept { return neuron_; }

 private:
  std::size_t neuron_;
};

}  // namespace levyif
