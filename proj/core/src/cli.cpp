#include "levyif/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "levyif/errors.hpp"
#include "levyif/fluid_engine.hpp"
#include "levyif/serialization.hpp"
#include "levyif/stability_analysis.hpp"
#include "levyif/verification.hpp"
#include "levyif/version.hpp"

namespace levyif {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

void write_json(const fs::path& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

/// Timestamps live here and only here; payload files stay byte-identical
/// across reruns with the same seed.
void write_run_meta(const fs::path& dir, const std::string& subcommand,
                    std::uint64_t seed) {
  const auto now = std::chrono::system_clock::now();
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  write_json(dir / "run_meta.json", ordered_json{{"version", kVersion},
                                                 {"subcommand", subcommand},
                                                 {"seed", seed},
                                                 {"unix_time", secs}});
}

std::string replica_file(const char* stem, std::uint64_t r, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_r%04llu.%s", stem,
                static_cast<unsigned long long>(r), ext);
  return buf;
}

double field_or(const ordered_json& block, const char* key, double fallback) {
  if (block.is_object() && block.contains(key))
    return block[key].get<double>();
  return fallback;
}

std::uint64_t field_or_u64(const ordered_json& block, const char* key,
                           std::uint64_t fallback) {
  if (block.is_object() && block.contains(key))
    return block[key].get<std::uint64_t>();
  return fallback;
}

Vec field_or_vec(const ordered_json& block, const char* key, Vec fallback) {
  if (block.is_object() && block.contains(key))
    return block[key].get<Vec>();
  return fallback;
}

struct CheckContext {
  const RunConfig& cfg;
  std::uint64_t seed;
};

CheckResult run_named_check(const std::string& name, const CheckContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const NetworkConfig& net = cfg.network;
  const ordered_json block =
      cfg.verify.is_object() && cfg.verify.contains(name)
          ? cfg.verify[name]
          : ordered_json();
  const double dt = field_or(block, "dt", cfg.sim.dt);
  const std::uint64_t replicas =
      field_or_u64(block, "replicas", cfg.sim.replicas);
  const std::uint64_t seed = field_or_u64(block, "seed", ctx.seed);

  if (name == "dominance") {
    return dominance_check(net, field_or_vec(block, "z0", cfg.initial_state()),
                           field_or(block, "horizon", 1000.0), dt, replicas,
                           seed);
  }
  if (name == "renewal_rate") {
    return renewal_rate_estimate(net.specs.front(),
                                 net.signal_laws.front().front(),
                                 field_or(block, "horizon", 1e5), replicas,
                                 seed, dt);
  }
  if (name == "empirical_rate") {
    const double horizon = field_or(block, "horizon", cfg.sim.horizon);
    return empirical_rate_check(
        net, horizon, field_or(block, "burn_in", std::min(1000.0, horizon / 10.0)),
        replicas, seed, dt);
  }
  if (name == "divergence") {
    return divergence_check(net, field_or(block, "horizon", 1e4), replicas,
                            seed, dt);
  }
  if (name == "fluid_deviation") {
    return fluid_deviation(net, field_or_vec(block, "phi0", cfg.fluid_phi0()),
                           field_or(block, "scale", 2000.0),
                           field_or(block, "dt", 1e-3), seed);
  }
  if (name == "spike_rate_window") {
    return spike_rate_window_check(
        net, field_or_vec(block, "phi0", cfg.fluid_phi0()),
        field_or(block, "scale", 2000.0), field_or(block, "t", 5.0),
        field_or(block, "window", 2.0), seed, dt);
  }
  if (name == "return_time") {
    const Mat b = net.mean_matrix();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i)
      max_diag = std::max(max_diag, b(i, i));
    const bool enforce =
        !(block.is_object() && block.contains("enforce_stable") &&
          block["enforce_stable"].is_boolean() &&
          !block["enforce_stable"].get<bool>());
    return return_time_estimate(
        net, field_or(block, "k0", 10.0 * max_diag),
        field_or(block, "epsilon", 0.01), replicas, seed, dt,
        field_or_u64(block, "step_cap", 1'000'000), enforce);
  }
  if (name == "bridge_monotonicity") {
    return bridge_monotonicity(
        field_or(block, "k", 0.5), field_or(block, "sigma", 1.0),
        field_or(block, "t", 1.0),
        field_or_vec(block, "x_grid", Vec{-1.0, 0.0, 1.0, 2.0}),
        std::max<std::uint64_t>(replicas, 10'000), seed,
        std::size_t(field_or_u64(block, "substeps", 64)));
  }
  if (name == "tv_diagnostic") {
    return tv_diagnostic(
        net, field_or_vec(block, "z0_a", Vec(net.n(), 1.0)),
        field_or_vec(block, "z0_b", Vec(net.n(), 50.0)),
        field_or(block, "t", 1000.0), replicas,
        std::size_t(field_or_u64(block, "bins", 50)), seed, dt);
  }
  throw ConfigError("unknown check name \"" + name + "\"");
}

std::vector<std::string> default_checks(const RunConfig& cfg) {
  const auto report = check_partial_stability(cfg.network.mean_matrix(),
                                              cfg.network.nu_vector());
  if (report.verdict == StabilityVerdict::Stable) {
    std::vector<std::string> checks{"dominance", "renewal_rate",
                                    "empirical_rate", "fluid_deviation",
                                    "return_time", "bridge_monotonicity",
                                    "tv_diagnostic"};
    if (cfg.network.preset) checks.insert(checks.begin() + 4,
                                          "spike_rate_window");
    return checks;
  }
  return {"dominance", "renewal_rate", "divergence"};
}

int do_simulate(const RunConfig& cfg, std::uint64_t seed, const fs::path& dir) {
  SimOptions opts;
  opts.sample_stride = cfg.sim.sample_stride;
  for (std::uint64_t r = 0; r < cfg.sim.replicas; ++r) {
    const SimRecord rec =
        simulate(cfg.network, cfg.initial_state(), cfg.sim.horizon, cfg.sim.dt,
                 replica_seed(seed, r), opts);
    write_file(dir / replica_file("sim", r, "jsonl"),
               sim_record_to_jsonl(rec));
    write_file(dir / replica_file("spikes", r, "csv"), spike_log_to_csv(rec));
  }
  std::cout << "simulate: " << cfg.sim.replicas << " replica(s), seed " << seed
            << ", output " << dir.string() << "\n";
  return exit_code::kPass;
}

int do_fluid(const RunConfig& cfg, const fs::path& dir) {
  const FluidTrajectory traj =
      integrate_fluid(cfg.fluid_phi0(), cfg.network.mean_matrix(),
                      cfg.network.nu_vector(), cfg.fluid.horizon);
  write_json(dir / "fluid.json", fluid_trajectory_to_json(traj));
  const char* status = traj.status == FluidStatus::EmptiedAt ? "emptied-at"
                       : traj.status == FluidStatus::Diverges
                           ? "diverges"
                           : "horizon-truncated";
  std::cout << "fluid: status " << status;
  if (traj.status == FluidStatus::EmptiedAt)
    std::cout << " " << traj.emptied_at;
  std::cout << ", output " << (dir / "fluid.json").string() << "\n";
  return exit_code::kPass;
}

int do_analyze(const RunConfig& cfg, const fs::path& dir) {
  const StabilityReport report = check_partial_stability(
      cfg.network.mean_matrix(), cfg.network.nu_vector());
  write_json(dir / "stability.json", stability_report_to_json(report));
  render_stability_table(report, std::cout);
  return exit_code::kPass;
}

int do_verify(const RunConfig& cfg, std::uint64_t seed,
              const std::vector<std::string>& requested, const fs::path& dir) {
  std::vector<std::string> names = requested;
  if (names.empty() && cfg.verify.is_object() && cfg.verify.contains("checks"))
    names = cfg.verify["checks"].get<std::vector<std::string>>();
  if (names.empty()) names = default_checks(cfg);

  CheckContext ctx{cfg, seed};
  std::vector<CheckResult> results;
  bool all_pass = true;
  for (const auto& name : names) {
    CheckResult res = run_named_check(name, ctx);
    std::cout << (res.pass ? "PASS" : "FAIL") << " " << res.name
              << "  statistic=" << res.statistic
              << " threshold=" << res.threshold << "\n";
    all_pass = all_pass && res.pass;
    results.push_back(std::move(res));
  }
  write_json(dir / "checks.json", check_results_to_json(results));
  return all_pass ? exit_code::kPass : exit_code::kCheckFailure;
}

}  // namespace

int dispatch(const std::string& subcommand, RunConfig config,
             const DispatchOptions& options) {
  if (options.seed) config.sim.seed = *options.seed;
  if (!options.out_dir.empty()) config.outputs.dir = options.out_dir;
  if (!options.format.empty()) config.outputs.format = options.format;

  const fs::path dir = config.outputs.dir;
  fs::create_directories(dir);
  write_run_meta(dir, subcommand, config.sim.seed);
  write_json(dir / "resolved_config.json", config.to_json());

  if (subcommand == "simulate")
    return do_simulate(config, config.sim.seed, dir);
  if (subcommand == "fluid") return do_fluid(config, dir);
  if (subcommand == "analyze") return do_analyze(config, dir);
  if (subcommand == "verify")
    return do_verify(config, config.sim.seed, options.checks, dir);
  throw ConfigError("unknown subcommand \"" + subcommand + "\"");
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Simulator and stability toolkit for networks of perfect "
               "integrate-and-fire inhibitory neurons"};
  app.require_subcommand(1);

  std::string config_path;
  DispatchOptions options;
  std::uint64_t seed_value = 0;

  app.add_option("--config", config_path, "Path to the JSON run config")
      ->required();
  app.add_option("--out", options.out_dir, "Output directory override");
  auto* seed_opt =
      app.add_option("--seed", seed_value, "Master seed override (u64)");
  app.add_option("--format", options.format, "Output format: json|csv");

  auto* sim_cmd = app.add_subcommand("simulate", "Run trajectory replicas");
  auto* fluid_cmd = app.add_subcommand("fluid", "Integrate the fluid limit");
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Stability report and subset table");
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the statistical check battery");
  verify_cmd->add_option("--check", options.checks,
                         "Check name (repeatable); default: all applicable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kPass : exit_code::kConfigError;
  }

  if (seed_opt->count() > 0) options.seed = seed_value;

  try {
    RunConfig cfg = parse_config_file(config_path);
    std::string subcommand;
    if (sim_cmd->parsed()) subcommand = "simulate";
    if (fluid_cmd->parsed()) subcommand = "fluid";
    if (analyze_cmd->parsed()) subcommand = "analyze";
    if (verify_cmd->parsed()) subcommand = "verify";
    return dispatch(subcommand, std::move(cfg), options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const SizeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return exit_code::kRuntimeError;
  }
}

}  // namespace levyif
