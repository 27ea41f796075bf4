#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "levyif/spiking_network.hpp"

namespace levyif {

struct SimParams {
  double horizon = 100.0;
  double dt = 0.01;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;          // mandatory in the document
  std::uint64_t sample_stride = 0; // 0: automatic
  std::optional<Vec> z0;           // default: all ones
};

struct FluidParams {
  std::optional<Vec> phi0;  // default: all coordinates equal, unit l1 norm
  double horizon = 100.0;
};

struct OutputParams {
  std::string dir = "out";
  std::string format = "json";  // json | csv (spike logs are always csv)
};

/// Validated run configuration. The symmetric shorthand is expanded into the
/// full signal-law matrix during parsing; serialization always emits the
/// expanded canonical form, so serialize(parse(x)) is a fixed point.
struct RunConfig {
  NetworkConfig network;
  SimParams sim;
  FluidParams fluid;
  nlohmann::ordered_json verify;  // per-check overrides, may be empty
  OutputParams outputs;

  Vec initial_state() const;
  Vec fluid_phi0() const;

  nlohmann::ordered_json to_json() const;
};

/// Parses and validates a config document. Throws ConfigError with a
/// path-qualified message on any violation.
RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

nlohmann::ordered_json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::ordered_json& j,
                                    const std::string& path);

}  // namespace levyif
