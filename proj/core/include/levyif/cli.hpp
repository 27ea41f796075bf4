#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyif/run_config.hpp"

namespace levyif {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kCheckFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kRuntimeError = 3;
}  // namespace exit_code

struct DispatchOptions {
  std::string out_dir;                    // overrides outputs.dir when set
  std::optional<std::uint64_t> seed;      // overrides sim.seed when set
  std::vector<std::string> checks;        // verify: subset of checks to run
  std::string format;                     // overrides outputs.format when set
};

/// Runs one subcommand (simulate | fluid | analyze | verify) against a parsed
/// config, writing artifacts into the output directory. Returns an exit code;
/// throws only for runtime failures the caller maps to exit codes.
int dispatch(const std::string& subcommand, RunConfig config,
             const DispatchOptions& options);

/// Full command-line entry point: argument parsing, config loading, dispatch,
/// and exit-code mapping (0 pass, 1 check failure, 2 config error,
/// 3 runtime error).
int run_cli(int argc, const char* const* argv);

}  // namespace levyif
