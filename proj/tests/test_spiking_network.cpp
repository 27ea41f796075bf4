#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyif/errors.hpp"
#include "levyif/spiking_network.hpp"

using namespace levyif;

namespace {

std::vector<double> spike_times(const SimRecord& rec, std::uint32_t neuron) {
  std::vector<double> t;
  for (const auto& ev : rec.spike_log)
    if (ev.neuron == neuron) t.push_back(ev.time);
  return t;
}

}  // namespace

TEST_CASE("deterministic single neuron fires with period H/nu") {
  // pure drift, dyadic dt keeps the arithmetic exact
  const NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 0.0);
  const SimRecord rec = simulate(cfg, {1.0}, 10.0, 0.5, 1);
  CHECK(spike_times(rec, 0) == std::vector<double>{1.0, 3.0, 5.0, 7.0, 9.0});
  CHECK(rec.eta_final[0] == 5);

  const SimRecord fine = simulate(cfg, {1.0}, 10.0, 1.0 / 128.0, 1);
  CHECK(spike_times(fine, 0) == std::vector<double>{1.0, 3.0, 5.0, 7.0, 9.0});
}

TEST_CASE("deterministic two-neuron event sequence") {
  const NetworkConfig cfg =
      NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.0);
  const double dt = 1.0 / 8.0;
  const SimRecord rec = simulate(cfg, {1.0, 1.5}, 6.0, dt, 1);

  // trace of the dynamics: neuron 1 fires at t=1, the inhibition at t=1
  // postpones neuron 2 to t=2.5, neuron 1 fires again at t=4
  REQUIRE(rec.spike_log.size() >= 3);
  CHECK(rec.spike_log[0].time == 1.0);
  CHECK(rec.spike_log[0].neuron == 0);
  CHECK(rec.spike_log[1].time == 2.5);
  CHECK(rec.spike_log[1].neuron == 1);
  CHECK(rec.spike_log[2].time == 4.0);
  CHECK(rec.spike_log[2].neuron == 0);

  auto state_at = [&](double t) {
    const auto idx = rec.sample_index_of_step(
        std::uint64_t(std::llround(t / dt)));
    REQUIRE(idx.has_value());
    return rec.z_samples[*idx];
  };
  CHECK(state_at(1.0) == Vec{2.0, 1.5});
  CHECK(state_at(2.5) == Vec{1.5, 2.0});
  CHECK(state_at(4.0) == Vec{2.0, 1.5});
}

TEST_CASE("noisy single-neuron rate approaches nu/b") {
  NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 1.0);
  const SimRecord rec = simulate(cfg, {1.0}, 2e4, 0.01, 99);
  const double rate = double(rec.eta_final[0]) / rec.horizon;
  CHECK(rate == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("apply_spike resets and increments") {
  CHECK(apply_spike({0.0, 5.0}, 0, {2.0, 1.0}) == Vec{2.0, 6.0});
  CHECK(apply_spike({-0.03, 5.0}, 0, {2.0, 1.0}) == Vec{2.0, 6.0});
  CHECK(apply_spike({0.0, 0.2, 7.0}, 0, {1.0, 0.5, 0.5}) ==
        Vec{1.0, 0.7, 7.5});
}

TEST_CASE("apply_spike validates its inputs") {
  CHECK_THROWS_AS(apply_spike({0.0, 1.0}, 0, {2.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(apply_spike({0.0, 1.0}, 0, {2.0, -1.0}), ParameterError);
  CHECK_THROWS_AS(apply_spike({0.5, 1.0}, 0, {2.0, 1.0}), ParameterError);
  CHECK_NOTHROW(apply_spike({0.5, 1.0}, 0, {2.0, 1.0}, /*crossed_flag=*/true));
}

TEST_CASE("single-neuron decoupled run is identical to the coupled one") {
  const NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 0.8);
  const SimRecord a = simulate(cfg, {1.0}, 500.0, 0.01, 7);
  const SimRecord b = decoupled_simulate(cfg, {1.0}, 500.0, 0.01, 7);
  CHECK(a == b);
}

TEST_CASE("vanishing cross-signals reproduce the decoupled counts") {
  NetworkConfig cfg = NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.5);
  // overwrite the cross entries with a nearly-zero constant law
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      if (i != j) cfg.signal_laws[i][j] = Distribution::constant(1e-4);
  cfg.preset.reset();

  const SimRecord full = simulate(cfg, {1.0, 1.0}, 1000.0, 0.01, 21);
  const SimRecord dec = decoupled_simulate(cfg, {1.0, 1.0}, 1000.0, 0.01, 21);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto a = full.eta_final[i], b = dec.eta_final[i];
    CHECK((a < b ? b - a : a - b) <= 2);
  }
}

TEST_CASE("pathwise count dominance under the shared seed") {
  const NetworkConfig cfg = NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.5);
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    const SimRecord full = simulate(cfg, {1.0, 1.0}, 1000.0, 0.01, seed);
    const SimRecord dec =
        decoupled_simulate(cfg, {1.0, 1.0}, 1000.0, 0.01, seed);
    for (std::size_t s = 0; s < full.sample_times.size(); ++s)
      for (std::size_t i = 0; i < 2; ++i)
        CHECK(full.eta_at(s, i) <= dec.eta_at(s, i));
  }
}

TEST_CASE("reconstruction identity from the logged increments and rows") {
  NetworkConfig cfg;
  cfg.specs = {LevySpec{1.0, 0.7, 0.3, Distribution::exponential(0.4)},
               LevySpec{1.2, 0.5, 0.0, {}}};
  cfg.signal_laws = {
      {Distribution::lognormal(0.3, 0.1), Distribution::uniform(0.2, 0.6)},
      {Distribution::constant(0.5), Distribution::exponential(1.5)}};
  const Vec z0{1.0, 2.0};
  const SimRecord rec = simulate(cfg, z0, 100.0, 0.01, 31);

  for (std::size_t s = 0; s < rec.sample_times.size(); ++s) {
    const std::uint64_t step = rec.sample_steps[s];
    Vec signal_sum(2, 0.0);
    for (const auto& ev : rec.spike_log) {
      if (ev.step >= step) continue;
      for (std::size_t i = 0; i < 2; ++i) signal_sum[i] += ev.signal_row[i];
    }
    for (std::size_t i = 0; i < 2; ++i) {
      const double reconstructed = z0[i] + rec.x_samples[s][i] +
                                   signal_sum[i] + rec.clamp_samples[s][i];
      CHECK(rec.z_samples[s][i] ==
            doctest::Approx(reconstructed).epsilon(1e-9));
    }
  }
}

TEST_CASE("identical seeds give bit-identical records") {
  const NetworkConfig cfg =
      NetworkConfig::symmetric(3, {2.0}, {1.0}, 1.0, 0.5, 0.5,
                               Distribution::uniform(0.1, 0.3));
  const SimRecord a = simulate(cfg, {1.0, 1.0, 1.0}, 200.0, 0.01, 17);
  const SimRecord b = simulate(cfg, {1.0, 1.0, 1.0}, 200.0, 0.01, 17);
  CHECK(a == b);
  const SimRecord c = simulate(cfg, {1.0, 1.0, 1.0}, 200.0, 0.01, 18);
  CHECK_FALSE(a == c);
}

TEST_CASE("potentials are positive after spikes and at samples") {
  const NetworkConfig cfg = NetworkConfig::symmetric(3, {2.0}, {1.0}, 1.0, 1.0);
  const SimRecord rec = simulate(cfg, {0.0, 1.0, 2.0}, 300.0, 0.01, 3);
  for (const auto& z : rec.z_samples)
    for (double v : z) CHECK(v >= 0.0);
  for (const auto& ev : rec.spike_log)
    for (double v : ev.signal_row) CHECK(v > 0.0);

  // per-neuron spike times are strictly increasing and counted exactly
  std::vector<double> last(3, -1.0);
  std::vector<std::uint64_t> counts(3, 0);
  for (const auto& ev : rec.spike_log) {
    CHECK(ev.time > last[ev.neuron]);
    last[ev.neuron] = ev.time;
    ++counts[ev.neuron];
  }
  CHECK(counts == rec.eta_final);
}

TEST_CASE("spike guard names the runaway neuron") {
  NetworkConfig cfg = NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.0);
  cfg.max_spikes_per_neuron = 10;
  try {
    simulate(cfg, {1.0, 50.0}, 100.0, 0.01, 1);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.neuron() == 0);
    CHECK(std::string(e.what()).find("neuron 1") != std::string::npos);
  }
}

TEST_CASE("parameter validation") {
  const NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 0.0);
  CHECK_THROWS_AS(simulate(cfg, {1.0}, 10.0, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(simulate(cfg, {1.0}, 0.001, 0.01, 1), ParameterError);
  CHECK_THROWS_AS(simulate(cfg, {-1.0}, 10.0, 0.01, 1), ParameterError);
  CHECK_THROWS_AS(simulate(cfg, {1.0, 2.0}, 10.0, 0.01, 1), ParameterError);
}

TEST_CASE("bar-mode start draws the first self-signal") {
  // constant self-signal: the bar process must start exactly at H
  const NetworkConfig cfg = NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.0);
  const SimRecord rec =
      decoupled_simulate(cfg, {}, 10.0, 0.25, 5, /*bar_mode=*/true);
  CHECK(rec.z_samples.front() == Vec{2.0, 2.0});
  // deterministic drift: spikes every 2 time units from the start
  CHECK(spike_times(rec, 0) == std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0});
}
