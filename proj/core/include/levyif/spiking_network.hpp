#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyif/levy_driver.hpp"
#include "levyif/linear_solve.hpp"

namespace levyif {

/// Records that a network was built from the symmetric shorthand
/// (b_ii = H_i > w_i = b_ij, common drift nu); several checks need the
/// closed-form quantities this enables.
struct SymmetricPreset {
  Vec h;
  Vec w;
  double nu = 1.0;
};

struct NetworkConfig {
  std::vector<LevySpec> specs;                      // one per neuron
  std::vector<std::vector<Distribution>> signal_laws;  // row i: emitted by i
  std::size_t max_spikes_per_neuron = 1'000'000;
  std::optional<SymmetricPreset> preset;

  std::size_t n() const noexcept { return specs.size(); }

  /// B with b_ij = E xi_ij (emitter i, receiver j).
  Mat mean_matrix() const;
  Vec nu_vector() const;

  void validate() const;

  /// Symmetric network: constant self-signal H_i, constant cross-signal w_i,
  /// identical driver (nu, sigma) for every neuron.
  static NetworkConfig symmetric(std::size_t n, Vec h, Vec w, double nu,
                                 double sigma, double jump_rate = 0.0,
                                 std::optional<Distribution> jump_law = {});
};

struct SpikeEvent {
  double time = 0.0;
  std::uint32_t neuron = 0;
  std::uint64_t ordinal = 0;     // 1-based per neuron
  std::uint64_t step = 0;        // detection step
  Vec signal_row;                // xi row applied at this spike
};

/// Trajectory record. Samples are taken after a step completes, so z is the
/// post-spike state; spike counts are defined per completed step (the k-th
/// spike contributes to eta(t) for every sample time after its step).
struct SimRecord {
  std::vector<double> sample_times;
  std::vector<std::uint64_t> sample_steps;
  std::vector<Vec> z_samples;       // [sample][neuron]
  std::vector<Vec> x_samples;       // accumulated driver increments
  std::vector<Vec> clamp_samples;   // accumulated reset-to-value corrections
  std::vector<SpikeEvent> spike_log;
  std::vector<std::uint64_t> eta_final;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double horizon = 0.0;            // n_steps * dt actually integrated
  std::optional<double> stopped_at;

  /// Spike count of `neuron` at the sample with the given index.
  std::uint64_t eta_at(std::size_t sample_index, std::size_t neuron) const;
  /// Index of the sample recorded at exactly this step, if any.
  std::optional<std::size_t> sample_index_of_step(std::uint64_t step) const;

  bool operator==(const SimRecord&) const;
};

struct SimOptions {
  std::uint64_t sample_stride = 0;  // 0: pick ~4096 samples automatically
  bool cross_signals = true;        // false: the decoupled process
  bool bar_init = false;            // draw z(0) as the first self-signal
  /// Optional early stop, evaluated on the post-step state.
  std::function<bool(double t, const Vec& z)> stop_when;
};

/// Simulates the interacting system: potentials follow the per-neuron driver
/// between spikes; a coordinate detected at 0 within a step resets to its
/// drawn self-signal and every other coordinate receives the corresponding
/// row entry. Deterministic given (config, z0, horizon, dt, seed).
SimRecord simulate(const NetworkConfig& config, const Vec& z0, double horizon,
                   double dt, std::uint64_t seed, const SimOptions& opts = {});

/// Same driving noise and signal draws as `simulate` with the same seed, but
/// cross-signals replaced by zero. With `bar_mode` the initial state is drawn
/// as the first self-signal per coordinate (undelayed renewal start).
SimRecord decoupled_simulate(const NetworkConfig& config, const Vec& z0,
                             double horizon, double dt, std::uint64_t seed,
                             bool bar_mode = false,
                             const SimOptions& opts = {});

/// Reset-to-value spike application: coordinate i becomes xi_row[i], every
/// other coordinate gains xi_row[j]. Exposed for tests and tooling; the
/// simulator applies the same rule inline.
Vec apply_spike(const Vec& potentials, std::size_t i, const Vec& xi_row,
                bool crossed_flag = false);

}  // namespace levyif
