#include "levyif/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "levyif/errors.hpp"
#include "levyif/fluid_engine.hpp"
#include "levyif/parallel.hpp"
#include "levyif/stability_analysis.hpp"

namespace levyif {

namespace {

using nlohmann::ordered_json;

double l1_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

/// Detection steps per neuron in ordinal order.
std::vector<std::vector<std::uint64_t>> spike_steps(const SimRecord& rec,
                                                    std::size_t n) {
  std::vector<std::vector<std::uint64_t>> steps(n);
  for (const auto& ev : rec.spike_log) steps[ev.neuron].push_back(ev.step);
  return steps;
}

std::uint64_t count_before_step(const std::vector<std::uint64_t>& steps,
                                std::uint64_t step) {
  return std::uint64_t(
      std::lower_bound(steps.begin(), steps.end(), step) - steps.begin());
}

void require_stable(const NetworkConfig& config, const char* check) {
  const auto report =
      check_partial_stability(config.mean_matrix(), config.nu_vector());
  if (report.verdict != StabilityVerdict::Stable)
    throw PreconditionError(std::string(check) +
                            ": configuration is not verified stable");
}

double mean_of(const Vec& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

CheckResult dominance_check(const NetworkConfig& config, const Vec& z0,
                            double horizon, double dt, std::uint64_t replicas,
                            std::uint64_t seed) {
  if (replicas < 1) throw ParameterError("dominance_check: replicas >= 1");
  const std::size_t n = config.n();

  std::vector<char> dominated(replicas, 0);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    const std::uint64_t rs = replica_seed(seed, r);
    const SimRecord full = simulate(config, z0, horizon, dt, rs);
    const SimRecord dec = decoupled_simulate(config, z0, horizon, dt, rs);
    const auto steps_full = spike_steps(full, n);
    const auto steps_dec = spike_steps(dec, n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (steps_full[i].size() > steps_dec[i].size()) {
        ok = false;
        break;
      }
      // eta(t) <= eta~(t) at every time iff each ordinal fires no earlier
      // in the interacting run
      for (std::size_t k = 0; k < steps_full[i].size(); ++k)
        if (steps_dec[i][k] > steps_full[i][k]) {
          ok = false;
          break;
        }
    }
    dominated[r] = ok ? 1 : 0;
  });

  std::uint64_t good = 0;
  for (char c : dominated) good += c;

  CheckResult res;
  res.name = "dominance";
  res.statistic = double(good) / double(replicas);
  res.threshold = 1.0;
  res.pass = good == replicas;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{{"dominated_replicas", good},
                             {"horizon", horizon},
                             {"dt", dt}};
  return res;
}

CheckResult renewal_rate_estimate(const LevySpec& spec,
                                  const Distribution& self_signal,
                                  double horizon, std::uint64_t replicas,
                                  std::uint64_t seed, double dt) {
  if (replicas < 1)
    throw ParameterError("renewal_rate_estimate: replicas >= 1");
  spec.validate("renewal_rate_estimate");
  self_signal.validate("renewal_rate_estimate.self_signal");
  const double target = spec.nu / self_signal.mean();
  if (!(horizon * target >= 1e3))
    throw ParameterError(
        "renewal_rate_estimate: horizon too short (need >= 1e3 expected spikes)");

  NetworkConfig cfg;
  cfg.specs = {spec};
  cfg.signal_laws = {{self_signal}};

  Vec rates(replicas, 0.0);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    const SimRecord rec = decoupled_simulate(cfg, {1.0}, horizon, dt,
                                             replica_seed(seed, r),
                                             /*bar_mode=*/true);
    rates[r] = double(rec.eta_final[0]) / rec.horizon;
  });
  const double mean_rate = mean_of(rates);

  CheckResult res;
  res.name = "renewal_rate";
  res.statistic = std::abs(mean_rate - target) / target;
  res.threshold = 0.02;
  res.pass = res.statistic <= res.threshold;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{{"mean_rate", mean_rate},
                             {"target", target},
                             {"horizon", horizon},
                             {"dt", dt}};
  return res;
}

CheckResult empirical_rate_check(const NetworkConfig& config, double horizon,
                                 double burn_in, std::uint64_t replicas,
                                 std::uint64_t seed, double dt) {
  if (replicas < 1) throw ParameterError("empirical_rate_check: replicas >= 1");
  if (!(burn_in >= 0.0) || !(burn_in < horizon))
    throw ParameterError("empirical_rate_check: need 0 <= burn_in < horizon");
  require_stable(config, "empirical_rate_check");

  const std::size_t n = config.n();
  const Vec target = steady_rates(config.mean_matrix(), config.nu_vector()).x;
  const std::uint64_t burn_step = std::uint64_t(std::llround(burn_in / dt));

  std::vector<Vec> rates(replicas);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    const SimRecord rec = simulate(config, Vec(n, 1.0), horizon, dt,
                                   replica_seed(seed, r));
    const auto steps = spike_steps(rec, n);
    Vec rate(n);
    const double span = rec.horizon - double(burn_step) * dt;
    for (std::size_t i = 0; i < n; ++i)
      rate[i] = double(rec.eta_final[i] -
                       count_before_step(steps[i], burn_step)) /
                span;
    rates[r] = std::move(rate);
  });

  Vec mean_rates(n, 0.0);
  for (const auto& rate : rates)
    for (std::size_t i = 0; i < n; ++i) mean_rates[i] += rate[i];
  for (auto& m : mean_rates) m /= double(replicas);

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(mean_rates[i] - target[i]) / target[i]);

  CheckResult res;
  res.name = "empirical_rate";
  res.statistic = worst;
  res.threshold = 0.03;
  res.pass = worst <= res.threshold;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{{"mean_rates", mean_rates},
                             {"target_rates", target},
                             {"horizon", horizon},
                             {"burn_in", burn_in},
                             {"dt", dt}};
  return res;
}

CheckResult divergence_check(const NetworkConfig& config, double horizon,
                             std::uint64_t replicas, std::uint64_t seed,
                             double dt) {
  if (replicas < 1) throw ParameterError("divergence_check: replicas >= 1");
  const Mat b = config.mean_matrix();
  const Vec nu = config.nu_vector();
  const std::size_t n = config.n();
  const StabilityReport report = check_partial_stability(b, nu);

  double predicted = 0.0;
  std::size_t coord = 0;
  bool negative_control = report.verdict == StabilityVerdict::Stable;

  if (!negative_control) {
    if (!report.witness)
      throw PreconditionError(
          "divergence_check: partial-risk verdict without witness subset");
    const auto& s = *report.witness;
    const SubsetCheck* witness_check = nullptr;
    for (const auto& c : report.subset_checks)
      if (c.subset == s) witness_check = &c;
    // drift the stabilized subset induces on each outside coordinate
    double best = -std::numeric_limits<double>::infinity();
    std::vector<char> in_s(n, 0);
    for (std::size_t i : s) in_s[i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_s[j]) continue;
      double slope = -nu[j];
      for (std::size_t i : s) slope += witness_check->a[i] * b(i, j);
      if (slope > best) {
        best = slope;
        coord = j;
      }
    }
    predicted = best;
  }

  Vec growth(replicas, 0.0);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    SimOptions opts;
    opts.sample_stride = 0;
    const SimRecord rec = simulate(config, Vec(n, 1.0), horizon, dt,
                                   replica_seed(seed, r), opts);
    const Vec& z_final = rec.z_samples.back();
    if (negative_control) {
      double worst = 0.0;
      for (double z : z_final) worst = std::max(worst, z / rec.horizon);
      growth[r] = worst;
    } else {
      growth[r] = z_final[coord] / rec.horizon;
    }
  });
  const double mean_growth = mean_of(growth);

  CheckResult res;
  res.name = "divergence";
  res.replicas = replicas;
  res.seed = seed;
  if (negative_control) {
    res.statistic = mean_growth;
    res.threshold = 0.05;
    res.pass = std::abs(mean_growth) <= res.threshold;
  } else {
    res.statistic = mean_growth;
    res.threshold = predicted > 1e-9 ? 0.25 * predicted : 0.05;
    res.pass = std::abs(mean_growth - predicted) <= res.threshold;
  }
  res.details = ordered_json{
      {"mode", negative_control ? "stable_negative_control" : "partial_risk"},
      {"coordinate", coord + 1},
      {"predicted_slope", predicted},
      {"mean_growth", mean_growth},
      {"horizon", horizon},
      {"dt", dt}};
  if (!negative_control) {
    std::vector<std::size_t> witness_1based;
    for (std::size_t i : *report.witness) witness_1based.push_back(i + 1);
    res.details["witness_subset"] = witness_1based;
  }
  return res;
}

CheckResult fluid_deviation(const NetworkConfig& config, const Vec& phi0,
                            double scale, double dt, std::uint64_t seed) {
  if (phi0.size() != config.n())
    throw ParameterError("fluid_deviation: phi0 size mismatch");
  if (std::abs(l1_norm(phi0) - 1.0) > 1e-9)
    throw ParameterError("fluid_deviation: phi0 must have unit l1 norm");
  if (!(scale >= 100.0))
    throw ParameterError("fluid_deviation: scale must be >= 100");

  const Mat b = config.mean_matrix();
  const Vec nu = config.nu_vector();
  double bound;
  if (config.preset) {
    bound = symmetric_emptying_bound(config.preset->h, config.preset->w,
                                     config.preset->nu);
  } else {
    bound = 100.0 / *std::min_element(nu.begin(), nu.end());
  }
  const FluidTrajectory fluid = integrate_fluid(phi0, b, nu, bound + 1.0);
  if (fluid.status != FluidStatus::EmptiedAt)
    throw PreconditionError("fluid_deviation: fluid trajectory does not empty");
  const double t_empty = fluid.emptied_at;

  Vec z0(config.n());
  for (std::size_t i = 0; i < z0.size(); ++i) z0[i] = scale * phi0[i];
  const double horizon = std::max(scale * t_empty, dt);
  const SimRecord rec = simulate(config, z0, horizon, dt, seed);

  double sup = 0.0;
  for (std::size_t s = 0; s < rec.sample_times.size(); ++s) {
    const double scaled_t = rec.sample_times[s] / scale;
    if (scaled_t > t_empty + 1e-12) break;
    const Vec phi = fluid.value_at(scaled_t);
    double dist = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
      dist += std::abs(rec.z_samples[s][i] / scale - phi[i]);
    sup = std::max(sup, dist);
  }

  CheckResult res;
  res.name = "fluid_deviation";
  res.statistic = sup;
  res.threshold = 0.1;
  res.pass = sup <= res.threshold;
  res.replicas = 1;
  res.seed = seed;
  res.details = ordered_json{{"scale", scale},
                             {"dt", dt},
                             {"emptying_time", t_empty},
                             {"phi0", phi0}};
  return res;
}

CheckResult spike_rate_window_check(const NetworkConfig& config,
                                    const Vec& phi0, double scale,
                                    double window_start, double window,
                                    std::uint64_t seed, double dt) {
  if (!config.preset)
    throw PreconditionError(
        "spike_rate_window_check: requires the symmetric preset");
  if (phi0.size() != config.n())
    throw ParameterError("spike_rate_window_check: phi0 size mismatch");
  if (std::abs(l1_norm(phi0) - 1.0) > 1e-9)
    throw ParameterError("spike_rate_window_check: phi0 must have unit l1 norm");
  if (!(scale >= 100.0))
    throw ParameterError("spike_rate_window_check: scale must be >= 100");

  const auto& preset = *config.preset;
  const double bound =
      symmetric_emptying_bound(preset.h, preset.w, preset.nu);
  if (!(window_start > bound))
    throw ParameterError(
        "spike_rate_window_check: window must start after the emptying bound");

  const Vec target = closed_form_rates(preset.h, preset.w, preset.nu);
  const double min_rate = *std::min_element(target.begin(), target.end());
  if (scale * window * min_rate < 10.0)
    throw ParameterError(
        "spike_rate_window_check: window too small for a rate estimate");

  Vec z0(config.n());
  for (std::size_t i = 0; i < z0.size(); ++i) z0[i] = scale * phi0[i];
  const double horizon = scale * (window_start + window);
  const SimRecord rec = simulate(config, z0, horizon, dt, seed);
  const auto steps = spike_steps(rec, config.n());

  const auto s1 = std::uint64_t(std::llround(scale * window_start / dt));
  const auto s2 = std::uint64_t(std::llround(horizon / dt));

  Vec window_rates(config.n());
  double worst = 0.0;
  for (std::size_t i = 0; i < config.n(); ++i) {
    const std::uint64_t c1 = count_before_step(steps[i], s1);
    const std::uint64_t c2 = count_before_step(steps[i], s2);
    window_rates[i] = double(c2 - c1) / (scale * window);
    worst = std::max(worst,
                     std::abs(window_rates[i] - target[i]) / target[i]);
  }

  CheckResult res;
  res.name = "spike_rate_window";
  res.statistic = worst;
  res.threshold = 0.05;
  res.pass = worst <= res.threshold;
  res.replicas = 1;
  res.seed = seed;
  res.details =
      ordered_json{{"window_rates", window_rates},
                   {"target_rates", target},
                   {"scale", scale},
                   {"window_start", window_start},
                   {"window", window},
                   {"note",
                    "single large scale treated as representative of the "
                    "subsequence limit"}};
  return res;
}

CheckResult return_time_estimate(const NetworkConfig& config, double k0,
                                 double epsilon, std::uint64_t replicas,
                                 std::uint64_t seed, double dt,
                                 std::uint64_t step_cap, bool enforce_stable,
                                 const Vec* z0_override) {
  if (replicas < 1) throw ParameterError("return_time_estimate: replicas >= 1");
  if (!(k0 > 0.0) || !(epsilon >= 0.0))
    throw ParameterError("return_time_estimate: need k0 > 0 and epsilon >= 0");
  if (enforce_stable) require_stable(config, "return_time_estimate");

  const std::size_t n = config.n();
  const double cap_time = double(step_cap) * dt;

  Vec tau(replicas, -1.0);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    const std::uint64_t rs = replica_seed(seed, r);
    Vec z0(n);
    if (z0_override) {
      z0 = *z0_override;
    } else {
      // uniform direction on the l1 sphere of radius k0
      RandomStream init = RandomStream::derived(rs, stream_tag::kInit, 0);
      double total = 0.0;
      for (auto& v : z0) total += (v = init.exponential(1.0));
      for (auto& v : z0) v = k0 * v / total;
    }
    SimOptions opts;
    opts.stop_when = [&](double t, const Vec& z) {
      return t > epsilon && l1_norm(z) < k0;
    };
    const SimRecord rec = simulate(config, z0, cap_time, dt, rs, opts);
    if (rec.stopped_at) tau[r] = *rec.stopped_at;
  });

  std::uint64_t capped = 0;
  double sum = 0.0;
  double worst = 0.0;
  for (double t : tau) {
    if (t < 0.0) {
      ++capped;
    } else {
      sum += t;
      worst = std::max(worst, t);
    }
  }
  const std::uint64_t returned = replicas - capped;

  CheckResult res;
  res.name = "return_time";
  res.statistic = returned ? sum / double(returned) : cap_time;
  res.threshold = cap_time;
  res.pass = capped == 0;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{{"capped_replicas", capped},
                             {"max_return_time", worst},
                             {"k0", k0},
                             {"epsilon", epsilon},
                             {"step_cap", step_cap},
                             {"dt", dt}};
  return res;
}

CheckResult bridge_monotonicity(double k, double sigma, double t,
                                const Vec& x_grid, std::uint64_t replicas,
                                std::uint64_t seed, std::size_t substeps) {
  if (x_grid.size() < 2)
    throw ParameterError("bridge_monotonicity: need at least two grid points");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1]))
      throw ParameterError("bridge_monotonicity: x_grid must be increasing");
  if (replicas < 10'000)
    throw ParameterError("bridge_monotonicity: replicas >= 1e4 per grid point");
  if (!(k > 0.0) || !(sigma > 0.0) || !(t > 0.0) || substeps < 1)
    throw ParameterError("bridge_monotonicity: bad parameters");

  const std::size_t points = x_grid.size();
  Vec p_hat(points, 0.0);

  // grid points run in parallel; each point's replica loop is sequential
  parallel_replicas(points, [&](std::uint64_t g) {
    const double x = x_grid[g];
    RandomStream rs(derive_seed(seed, stream_tag::kInit, g));
    const double span = t / double(substeps);
    std::uint64_t survived = 0;
    for (std::uint64_t r = 0; r < replicas; ++r) {
      double v = 0.0;
      double s = 0.0;
      bool alive = v + k > 0.0;
      for (std::size_t j = 1; j <= substeps && alive; ++j) {
        const double remaining = t - s;
        const double mean = v + (x - v) * (span / remaining);
        const double var =
            sigma * sigma * span * (remaining - span) / remaining;
        const double next = mean + std::sqrt(std::max(var, 0.0)) * rs.gaussian();
        // interior dip between sampled nodes
        const double p_dip = crossing_probability(v + k, next + k, sigma, span);
        if (next + k <= 0.0 || rs.uniform() < p_dip) alive = false;
        v = next;
        s += span;
      }
      if (alive) ++survived;
    }
    p_hat[g] = double(survived) / double(replicas);
  });

  double worst_z = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g + 1 < points; ++g) {
    const double se2 = p_hat[g] * (1.0 - p_hat[g]) / double(replicas) +
                       p_hat[g + 1] * (1.0 - p_hat[g + 1]) / double(replicas);
    const double se = std::sqrt(std::max(se2, 1e-300));
    worst_z = std::max(worst_z, (p_hat[g] - p_hat[g + 1]) / se);
  }

  Vec closed_form(points);
  for (std::size_t g = 0; g < points; ++g) {
    const double x = x_grid[g];
    closed_form[g] =
        x < -k ? 0.0 : 1.0 - std::exp(-2.0 * k * (x + k) / (sigma * sigma * t));
  }

  CheckResult res;
  res.name = "bridge_monotonicity";
  res.statistic = worst_z;
  res.threshold = 3.0;
  res.pass = worst_z <= res.threshold;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{{"x_grid", x_grid},
                             {"p_hat", p_hat},
                             {"closed_form", closed_form},
                             {"k", k},
                             {"sigma", sigma},
                             {"t", t},
                             {"substeps", substeps}};
  return res;
}

namespace {

double histogram_l1(const Vec& a, const Vec& b, std::size_t bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : a) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : b) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(hi > lo)) return 0.0;
  const double width = (hi - lo) / double(bins);

  std::vector<double> pa(bins, 0.0), pb(bins, 0.0);
  auto drop = [&](std::vector<double>& p, double v) {
    auto idx = std::size_t((v - lo) / width);
    p[std::min(idx, bins - 1)] += 1.0;
  };
  for (double v : a) drop(pa, v);
  for (double v : b) drop(pb, v);

  double dist = 0.0;
  for (std::size_t i = 0; i < bins; ++i)
    dist += std::abs(pa[i] / double(a.size()) - pb[i] / double(b.size()));
  return dist;
}

}  // namespace

CheckResult tv_diagnostic(const NetworkConfig& config, const Vec& z0_a,
                          const Vec& z0_b, double t, std::uint64_t replicas,
                          std::size_t bins, std::uint64_t seed, double dt) {
  if (replicas < 2) throw ParameterError("tv_diagnostic: replicas >= 2");
  if (bins < 2) throw ParameterError("tv_diagnostic: bins >= 2");
  require_stable(config, "tv_diagnostic");
  const std::size_t n = config.n();
  if (z0_a.size() != n || z0_b.size() != n)
    throw ParameterError("tv_diagnostic: initial state size mismatch");

  const auto quarter_step = std::uint64_t(std::llround(t / (4.0 * dt)));
  if (quarter_step == 0) throw ParameterError("tv_diagnostic: t too small");
  const double horizon = double(4 * quarter_step) * dt;

  // [coord][replica] at the quarter point and the endpoint, per start
  std::vector<Vec> qa(n, Vec(replicas)), qb(n, Vec(replicas));
  std::vector<Vec> fa(n, Vec(replicas)), fb(n, Vec(replicas));

  parallel_replicas(replicas, [&](std::uint64_t r) {
    SimOptions opts;
    opts.sample_stride = quarter_step;
    const SimRecord ra = simulate(config, z0_a, horizon, dt,
                                  replica_seed(seed, 2 * r), opts);
    const SimRecord rb = simulate(config, z0_b, horizon, dt,
                                  replica_seed(seed, 2 * r + 1), opts);
    const auto qi = ra.sample_index_of_step(quarter_step);
    for (std::size_t i = 0; i < n; ++i) {
      qa[i][r] = ra.z_samples[*qi][i];
      qb[i][r] = rb.z_samples[*qi][i];
      fa[i][r] = ra.z_samples.back()[i];
      fb[i][r] = rb.z_samples.back()[i];
    }
  });

  double stat_quarter = 0.0, stat_final = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stat_quarter = std::max(stat_quarter, histogram_l1(qa[i], qb[i], bins));
    stat_final = std::max(stat_final, histogram_l1(fa[i], fb[i], bins));
  }

  CheckResult res;
  res.name = "tv_diagnostic";
  res.statistic = stat_final;
  res.threshold = 0.1;
  res.pass = stat_final < 0.1 && stat_final < stat_quarter;
  res.replicas = replicas;
  res.seed = seed;
  res.details = ordered_json{
      {"distance_at_t", stat_final},
      {"distance_at_quarter", stat_quarter},
      {"t", horizon},
      {"bins", bins},
      {"dt", dt},
      {"note",
       "heuristic decay proxy; histogram L1 per coordinate, not a "
       "total-variation certificate"}};
  return res;
}

}  // namespace levyif
