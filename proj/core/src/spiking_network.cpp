#include "levyif/spiking_network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levyif/errors.hpp"

namespace levyif {

Mat NetworkConfig::mean_matrix() const {
  Mat b(n(), n());
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j) b(i, j) = signal_laws[i][j].mean();
  return b;
}

Vec NetworkConfig::nu_vector() const {
  Vec nu(n());
  for (std::size_t i = 0; i < n(); ++i) nu[i] = specs[i].nu;
  return nu;
}

void NetworkConfig::validate() const {
  if (specs.empty()) throw ParameterError("network needs at least one neuron");
  if (signal_laws.size() != n())
    throw ParameterError("signal_laws must have one row per neuron");
  for (std::size_t i = 0; i < n(); ++i) {
    specs[i].validate("neuron " + std::to_string(i + 1));
    if (signal_laws[i].size() != n())
      throw ParameterError("signal_laws row " + std::to_string(i + 1) +
                           " has wrong length");
    for (std::size_t j = 0; j < n(); ++j) {
      std::ostringstream ctx;
      ctx << "signal_laws[" << i + 1 << "][" << j + 1 << "]";
      signal_laws[i][j].validate(ctx.str());
    }
  }
  if (max_spikes_per_neuron == 0)
    throw ParameterError("max_spikes_per_neuron must be positive");
  if (preset) {
    if (preset->h.size() != n() || preset->w.size() != n())
      throw ParameterError("symmetric preset vectors have wrong length");
    for (std::size_t i = 0; i < n(); ++i)
      if (!(preset->h[i] > preset->w[i]) || !(preset->w[i] > 0.0))
        throw ParameterError("symmetric preset requires H > w > 0");
  }
}

NetworkConfig NetworkConfig::symmetric(std::size_t n, Vec h, Vec w, double nu,
                                       double sigma, double jump_rate,
                                       std::optional<Distribution> jump_law) {
  if (n == 0) throw ParameterError("symmetric preset: n must be >= 1");
  if (h.size() == 1) h.assign(n, h[0]);
  if (w.size() == 1) w.assign(n, w[0]);
  if (h.size() != n || w.size() != n)
    throw ParameterError("symmetric preset: H and w must have length 1 or n");

  NetworkConfig cfg;
  cfg.specs.assign(n, LevySpec{nu, sigma, jump_rate, jump_law});
  cfg.signal_laws.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.signal_laws[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      cfg.signal_laws[i].push_back(
          Distribution::constant(i == j ? h[i] : w[i]));
  }
  cfg.preset = SymmetricPreset{std::move(h), std::move(w), nu};
  cfg.validate();
  return cfg;
}

std::uint64_t SimRecord::eta_at(std::size_t sample_index,
                                std::size_t neuron) const {
  const std::uint64_t step = sample_steps.at(sample_index);
  std::uint64_t count = 0;
  for (const auto& ev : spike_log)
    if (ev.neuron == neuron && ev.step < step) ++count;
  return count;
}

std::optional<std::size_t> SimRecord::sample_index_of_step(
    std::uint64_t step) const {
  auto it = std::lower_bound(sample_steps.begin(), sample_steps.end(), step);
  if (it != sample_steps.end() && *it == step)
    return std::size_t(it - sample_steps.begin());
  return std::nullopt;
}

bool SimRecord::operator==(const SimRecord& o) const {
  auto events_equal = [](const SpikeEvent& a, const SpikeEvent& b) {
    return a.time == b.time && a.neuron == b.neuron && a.ordinal == b.ordinal &&
           a.step == b.step && a.signal_row == b.signal_row;
  };
  if (!(sample_times == o.sample_times && sample_steps == o.sample_steps &&
        z_samples == o.z_samples && x_samples == o.x_samples &&
        clamp_samples == o.clamp_samples && eta_final == o.eta_final &&
        seed == o.seed && dt == o.dt && horizon == o.horizon &&
        stopped_at == o.stopped_at))
    return false;
  if (spike_log.size() != o.spike_log.size()) return false;
  for (std::size_t k = 0; k < spike_log.size(); ++k)
    if (!events_equal(spike_log[k], o.spike_log[k])) return false;
  return true;
}

Vec apply_spike(const Vec& potentials, std::size_t i, const Vec& xi_row,
                bool crossed_flag) {
  if (i >= potentials.size() || xi_row.size() != potentials.size())
    throw ParameterError("apply_spike: index or row size out of range");
  for (double v : xi_row)
    if (!(v > 0.0))
      throw ParameterError("apply_spike: signal row must be strictly positive");
  if (!crossed_flag && potentials[i] > 0.0)
    throw ParameterError("apply_spike: coordinate has not reached threshold");

  Vec out = potentials;
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = (j == i) ? xi_row[i] : out[j] + xi_row[j];
  return out;
}

namespace {

struct NeuronStreams {
  RandomStream noise;
  RandomStream bridge;
  RandomStream signal;
};

// Per-step crossing detection walks the sub-intervals delimited by jump
// offsets; the continuous part is apportioned linearly and a shared-stream
// Bernoulli decides sub-step dips between positive endpoints. All bridge
// uniforms for a step are consumed up front so coupled runs stay aligned
// no matter where (or whether) a crossing fires.
struct Detection {
  bool fired = false;
  double time_in_step = 0.0;
  double end_value = 0.0;  // value at step end when no crossing fired
};

Detection detect_crossing(double start, const Increment& inc, double dt,
                          double sigma, const double* bridge_u) {
  Detection det;
  double cur = start;
  double a = 0.0;
  const std::size_t pieces = inc.jumps.size() + 1;
  const double sigma2 = sigma * sigma;

  for (std::size_t p = 0; p < pieces; ++p) {
    const double b = (p < inc.jumps.size()) ? inc.jumps[p].offset : dt;
    const double span = b - a;
    const double vb = cur + inc.continuous * (span / dt);

    if (cur <= 0.0) {
      det.fired = true;
      det.time_in_step = a;
      return det;
    }
    if (vb <= 0.0) {
      det.fired = true;
      det.time_in_step = b;
      return det;
    }
    if (sigma > 0.0 && span > 0.0) {
      const double u = bridge_u[p];
      // skip exp() when the exponent makes a crossing numerically impossible
      const double x2 = 2.0 * cur * vb;
      const bool possible = x2 < 40.0 * sigma2 * span || u < 1e-17;
      if (possible && u < std::exp(-x2 / (sigma2 * span))) {
        det.fired = true;
        det.time_in_step = a + 0.5 * span;
        return det;
      }
    }
    cur = vb;
    if (p < inc.jumps.size()) cur += inc.jumps[p].size;
    a = b;
  }
  det.end_value = cur;
  return det;
}

}  // namespace

static SimRecord run_network(const NetworkConfig& config, Vec z0,
                             double horizon, double dt, std::uint64_t seed,
                             const SimOptions& opts) {
  config.validate();
  const std::size_t n = config.n();
  if (!std::isfinite(dt) || dt <= 0.0)
    throw ParameterError("simulate: dt must be finite and > 0");
  if (!std::isfinite(horizon) || horizon < dt)
    throw ParameterError("simulate: horizon must be finite and >= dt");
  if (!opts.bar_init) {
    if (z0.size() != n) throw ParameterError("simulate: z0 size mismatch");
    for (double v : z0)
      if (!std::isfinite(v) || v < 0.0)
        throw ParameterError("simulate: z0 must be nonnegative and finite");
  }

  const std::uint64_t n_steps =
      std::uint64_t(std::llround(std::ceil(horizon / dt - 1e-9)));
  const std::uint64_t stride =
      opts.sample_stride > 0 ? opts.sample_stride
                             : std::max<std::uint64_t>(1, n_steps / 4096);

  std::vector<NeuronStreams> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    streams.push_back({RandomStream::derived(seed, stream_tag::kNoise, i),
                       RandomStream::derived(seed, stream_tag::kBridge, i),
                       RandomStream::derived(seed, stream_tag::kSignal, i)});

  auto draw_row = [&](std::size_t i, Vec& row) {
    row.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      row[j] = config.signal_laws[i][j].sample(streams[i].signal);
  };

  SimRecord rec;
  rec.seed = seed;
  rec.dt = dt;
  rec.horizon = double(n_steps) * dt;
  rec.eta_final.assign(n, 0);

  Vec z(n);
  if (opts.bar_init) {
    Vec row;
    for (std::size_t i = 0; i < n; ++i) {
      draw_row(i, row);
      z[i] = row[i];
    }
  } else {
    z = std::move(z0);
  }

  Vec x_cum(n, 0.0), clamp_cum(n, 0.0);
  std::vector<std::uint64_t> count(n, 0);

  auto record_sample = [&](std::uint64_t step) {
    rec.sample_times.push_back(double(step) * dt);
    rec.sample_steps.push_back(step);
    rec.z_samples.push_back(z);
    rec.x_samples.push_back(x_cum);
    rec.clamp_samples.push_back(clamp_cum);
  };
  record_sample(0);

  std::vector<Increment> inc(n);
  std::vector<std::vector<double>> bridge_u(n);
  Vec row;

  for (std::uint64_t step = 0; step < n_steps; ++step) {
    // noise and bridge draws happen for every neuron before any state
    // update; consumption is a function of the configuration only
    for (std::size_t i = 0; i < n; ++i) {
      sample_increment_into(config.specs[i], dt, streams[i].noise, inc[i]);
      const std::size_t pieces = inc[i].jumps.size() + 1;
      bridge_u[i].resize(pieces);
      if (config.specs[i].sigma > 0.0)
        for (auto& u : bridge_u[i]) u = streams[i].bridge.uniform();
      x_cum[i] += inc[i].total();
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double additive_end = z[i] + inc[i].total();
      const Detection det = detect_crossing(z[i], inc[i], dt,
                                            config.specs[i].sigma,
                                            bridge_u[i].data());
      if (!det.fired) {
        z[i] = det.end_value;
        continue;
      }

      if (++count[i] > config.max_spikes_per_neuron) {
        std::ostringstream os;
        os << "spike guard tripped: neuron " << i + 1 << " exceeded "
           << config.max_spikes_per_neuron << " spikes";
        throw SimulationError(os.str(), i);
      }
      draw_row(i, row);

      SpikeEvent ev;
      ev.time = double(step) * dt + det.time_in_step;
      ev.neuron = std::uint32_t(i);
      ev.ordinal = count[i];
      ev.step = step;
      ev.signal_row = row;
      rec.spike_log.push_back(std::move(ev));

      // reset-to-value: the row is already accounted for inside S, so the
      // correction removes the residual additive value (undershoot plus the
      // discarded remainder of the step)
      clamp_cum[i] -= additive_end;
      z[i] = row[i];
      if (opts.cross_signals)
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) z[j] += row[j];
    }

    const std::uint64_t done = step + 1;
    if (done % stride == 0 || done == n_steps) record_sample(done);

    if (opts.stop_when && opts.stop_when(double(done) * dt, z)) {
      rec.stopped_at = double(done) * dt;
      if (done % stride != 0 && done != n_steps) record_sample(done);
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) rec.eta_final[i] = count[i];
  return rec;
}

SimRecord simulate(const NetworkConfig& config, const Vec& z0, double horizon,
                   double dt, std::uint64_t seed, const SimOptions& opts) {
  SimOptions o = opts;
  o.cross_signals = true;
  o.bar_init = false;
  return run_network(config, z0, horizon, dt, seed, o);
}

SimRecord decoupled_simulate(const NetworkConfig& config, const Vec& z0,
                             double horizon, double dt, std::uint64_t seed,
                             bool bar_mode, const SimOptions& opts) {
  SimOptions o = opts;
  o.cross_signals = false;
  o.bar_init = bar_mode;
  return run_network(config, z0, horizon, dt, seed, o);
}

}  // namespace levyif
