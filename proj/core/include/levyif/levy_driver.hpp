#pragma once

#include <optional>
#include <vector>

#include "levyif/distributions.hpp"
#include "levyif/rng.hpp"

namespace levyif {

/// Parameters of one spectrally positive driving coordinate: Brownian part
/// with scale `sigma`, compound-Poisson positive jumps at rate `jump_rate`,
/// and a continuous drift chosen so the total mean rate is exactly -nu.
struct LevySpec {
  double nu = 1.0;         ///< mean decay rate, -E X(1), must be > 0
  double sigma = 0.0;      ///< diffusion scale, >= 0
  double jump_rate = 0.0;  ///< Poisson intensity, >= 0
  std::optional<Distribution> jump_law;  ///< required iff jump_rate > 0

  double jump_mean() const noexcept {
    return jump_rate > 0.0 && jump_law ? jump_law->mean() : 0.0;
  }

  /// d = -(nu + jump_rate * E jump); the jumps' mean motion is cancelled so
  /// that E X(t) = -nu * t holds exactly.
  double continuous_drift() const noexcept {
    return -(nu + jump_rate * jump_mean());
  }

  void validate(const std::string& context = {}) const;
};

struct Jump {
  double offset;  ///< position inside the step, in (0, dt)
  double size;    ///< strictly positive
};

/// One sampled increment of X over a step: a Gaussian continuous part plus
/// offset-sorted positive jumps.
struct Increment {
  double continuous = 0.0;
  std::vector<Jump> jumps;

  double jump_total() const noexcept {
    double s = 0.0;
    for (const auto& j : jumps) s += j.size;
    return s;
  }
  double total() const noexcept { return continuous + jump_total(); }
};

/// Samples X(dt). continuous ~ Normal(d*dt, sigma^2*dt); jump count
/// ~ Poisson(jump_rate*dt) with i.i.d. sizes from jump_law and offsets
/// uniform in the step. Draw order is fixed (gaussian, count, offsets,
/// sizes) and nothing is consumed for features switched off by the configuration,
/// so streams stay aligned across coupled runs of the same configuration.
Increment sample_increment(const LevySpec& spec, double dt, RandomStream& rs);

/// In-place variant reusing the jump buffer; used by the hot loop.
void sample_increment_into(const LevySpec& spec, double dt, RandomStream& rs,
                           Increment& out);

/// Probability that a Brownian path between positive endpoint values
/// z_start, z_end over a step of length dt dips to 0 inside the step:
/// exp(-2*z_start*z_end/(sigma^2*dt)). Returns 1 if either endpoint is
/// already <= 0 and 0 for a deterministic path.
double crossing_probability(double z_start, double z_end, double sigma,
                            double dt);

}  // namespace levyif
