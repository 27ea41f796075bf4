// Acceptance battery: one pass/fail line per criterion, nonzero exit when
// anything fails. Every tolerance is pinned here; seeds are fixed so reruns
// are byte-for-byte reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "levyif/fluid_engine.hpp"
#include "levyif/rng.hpp"
#include "levyif/serialization.hpp"
#include "levyif/spiking_network.hpp"
#include "levyif/stability_analysis.hpp"
#include "levyif/verification.hpp"

using namespace levyif;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int index, const char* name, const char* target,
            const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (!out.pass) ++g_failures;
  std::printf("[%2d/10] %s  %-34s %s  (%.1fs, target %s)\n", index,
              out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs,
              target);
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

NetworkConfig partial_risk_config() {
  NetworkConfig cfg;
  cfg.specs.assign(3, LevySpec{1.0, 0.5, 0.0, {}});
  const double b[3][3] = {{8, 2, 6}, {2, 8, 6}, {6, 6, 8}};
  cfg.signal_laws.resize(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      cfg.signal_laws[i].push_back(Distribution::constant(b[i][j]));
  return cfg;
}

// ---- criteria implementations, reused by the determinism rerun ----

std::string run_single_neuron_payload() {
  const NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 1.0);
  const SimRecord rec = simulate(cfg, {1.0}, 1e5, 0.005, 101);
  return sim_record_to_jsonl(rec);
}

double run_single_neuron_rate() {
  const NetworkConfig cfg = NetworkConfig::symmetric(1, {2.0}, {1.0}, 1.0, 1.0);
  const SimRecord rec = simulate(cfg, {1.0}, 1e5, 0.005, 101);
  return double(rec.eta_final[0]) / rec.horizon;
}

std::string run_analysis_payload() {
  const NetworkConfig cfg = partial_risk_config();
  return stability_report_to_json(
             check_partial_stability(cfg.mean_matrix(), cfg.nu_vector()))
      .dump(2);
}

CheckResult run_bridge_check() {
  return bridge_monotonicity(0.5, 1.0, 1.0, {-1.0, 0.0, 1.0, 2.0}, 100000,
                             108);
}

}  // namespace

int main() {
  std::printf("acceptance battery (seeds pinned; 10 criteria)\n");

  report(1, "single-neuron renewal rate", "<10s", [] {
    const double rate = run_single_neuron_rate();
    const double err = std::abs(rate - 0.5) / 0.5;
    return Outcome{err <= 0.02, fmt("rate=%.4f relerr=%.4f tol=0.02", rate, err)};
  });

  report(2, "symmetric three-neuron rates", "<2min", [] {
    const NetworkConfig cfg =
        NetworkConfig::symmetric(3, {2.0}, {1.0}, 1.0, 0.5);
    const CheckResult res = empirical_rate_check(cfg, 1e5, 1000.0, 20, 102);
    return Outcome{res.pass, fmt("max relerr=%.4f tol=%.2f", res.statistic,
                                 res.threshold)};
  });

  report(3, "partial-stability counterexample, analysis", "exact", [] {
    const NetworkConfig cfg = partial_risk_config();
    const SteadyRates sr = steady_rates(cfg.mean_matrix(), cfg.nu_vector());
    bool ok = !sr.feasible;
    ok = ok && std::abs(sr.x[0] - 0.25) <= 1e-12 &&
         std::abs(sr.x[1] - 0.25) <= 1e-12 &&
         std::abs(sr.x[2] + 0.25) <= 1e-12;

    const StabilityReport report =
        check_partial_stability(cfg.mean_matrix(), cfg.nu_vector());
    ok = ok && report.verdict == StabilityVerdict::PartialRisk;
    ok = ok && report.witness &&
         *report.witness == std::vector<std::size_t>{0, 1};
    double load = 0.0, budget = 0.0;
    for (const auto& check : report.subset_checks)
      if (check.subset == std::vector<std::size_t>{0, 1}) {
        load = check.load;
        budget = check.budget;
        ok = ok && std::abs(check.a[0] - 0.1) <= 1e-12 &&
             std::abs(check.a[1] - 0.1) <= 1e-12 && !check.pass;
      }
    ok = ok && std::abs(load - 1.2) <= 1e-12 && std::abs(budget - 1.0) <= 1e-12;
    return Outcome{ok, fmt("x3=-0.25 load=%.3f budget=%.3f", load, budget)};
  });

  report(4, "partial-stability counterexample, dynamics", "<2min", [] {
    const CheckResult res = divergence_check(partial_risk_config(), 1e4, 20, 104);
    return Outcome{
        res.pass && std::abs(res.statistic - 0.2) <= 0.05,
        fmt("Z3(T)/T=%.4f predicted=%.2f (tol 0.05)", res.statistic, 0.2)};
  });

  report(5, "fluid emptying bound, 50 random draws", "exact", [] {
    RandomStream rs(105);
    double worst_slack = 1e300;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + std::size_t(rs.uniform() * 6.0);
      Vec h(n), w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.2 + 1.8 * rs.uniform();
        h[i] = w[i] * (1.1 + 8.9 * rs.uniform());
      }
      const double nu = 0.3 + 2.7 * rs.uniform();
      Mat b(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = i == j ? h[i] : w[i];
      Vec phi0(n);
      double total = 0.0;
      for (auto& x : phi0) total += (x = rs.exponential(1.0));
      for (auto& x : phi0) x /= total;

      const double bound = symmetric_emptying_bound(h, w, nu);
      const FluidTrajectory traj =
          integrate_fluid(phi0, b, Vec(n, nu), bound + 1.0);
      if (traj.status != FluidStatus::EmptiedAt ||
          traj.emptied_at > bound + 1e-9)
        return Outcome{false, fmt("violated at trial, t=%.4f bound=%.4f",
                                  traj.emptied_at, bound)};
      worst_slack = std::min(worst_slack, bound - traj.emptied_at);
    }
    return Outcome{true, fmt("all 50 emptied; min slack=%.3f", worst_slack,
                             0.0)};
  });

  report(6, "fluid-simulation convergence at scale 2000", "<1min", [] {
    const NetworkConfig cfg =
        NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.5);
    const CheckResult res = fluid_deviation(cfg, {0.5, 0.5}, 2000.0, 1e-3, 106);
    return Outcome{res.pass, fmt("sup l1 deviation=%.4f tol=%.2f",
                                 res.statistic, res.threshold)};
  });

  report(7, "pathwise dominance, 200 coupled replicas", "exact", [] {
    const NetworkConfig cfg =
        NetworkConfig::symmetric(3, {2.0}, {1.0}, 1.0, 0.5);
    const CheckResult res =
        dominance_check(cfg, {1.0, 1.0, 1.0}, 1e3, 0.01, 200, 107);
    return Outcome{res.pass && res.statistic == 1.0,
                   fmt("dominated fraction=%.3f (must be 1)", res.statistic,
                       0.0)};
  });

  report(8, "bridge monotonicity and closed form", "<1min", [] {
    const CheckResult res = run_bridge_check();
    const Vec p_hat = res.details["p_hat"].get<Vec>();
    const double p0 = p_hat[1];
    const double exact = 1.0 - std::exp(-0.5);
    const double se = std::sqrt(exact * (1.0 - exact) / 100000.0);
    const bool closed_ok = std::abs(p0 - exact) <= 3.0 * se;
    return Outcome{res.pass && closed_ok,
                   fmt("max z=%.2f; p(0)=%.4f vs 0.3935", res.statistic, p0)};
  });

  report(9, "distributional-convergence diagnostic", "<5min", [] {
    const NetworkConfig cfg =
        NetworkConfig::symmetric(2, {2.0}, {1.0}, 1.0, 0.5);
    const CheckResult res = tv_diagnostic(cfg, {1.0, 1.0}, {50.0, 50.0}, 1e3,
                                          10000, 50, 109);
    const double quarter = res.details["distance_at_quarter"].get<double>();
    return Outcome{res.pass, fmt("L1(T)=%.4f L1(T/4)=%.4f (need <0.1 and decay)",
                                 res.statistic, quarter)};
  });

  report(10, "determinism of result payloads", "exact", [] {
    const std::string sim_a = run_single_neuron_payload();
    const std::string sim_b = run_single_neuron_payload();
    const std::string ana_a = run_analysis_payload();
    const std::string ana_b = run_analysis_payload();
    const std::string chk_a = check_result_to_json(run_bridge_check()).dump();
    const std::string chk_b = check_result_to_json(run_bridge_check()).dump();
    const bool ok = sim_a == sim_b && ana_a == ana_b && chk_a == chk_b;
    return Outcome{ok, ok ? "byte-identical reruns (sim, analysis, check)"
                          : "payload mismatch"};
  });

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
