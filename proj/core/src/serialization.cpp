#include "levyif/serialization.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace levyif {

using nlohmann::ordered_json;

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sim_record_to_jsonl(const SimRecord& rec) {
  // running spike counts per sample, from detection steps
  const std::size_t n = rec.eta_final.size();
  std::vector<std::uint64_t> eta(n, 0);
  std::size_t next_event = 0;

  std::string out;
  for (std::size_t s = 0; s < rec.sample_times.size(); ++s) {
    const std::uint64_t step = rec.sample_steps[s];
    while (next_event < rec.spike_log.size() &&
           rec.spike_log[next_event].step < step)
      ++eta[rec.spike_log[next_event++].neuron];
    ordered_json line{{"t", rec.sample_times[s]},
                      {"z", rec.z_samples[s]},
                      {"x", rec.x_samples[s]},
                      {"clamp", rec.clamp_samples[s]},
                      {"eta", eta}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string spike_log_to_csv(const SimRecord& rec) {
  std::string out = "time,neuron,ordinal\n";
  for (const auto& ev : rec.spike_log) {
    out += format_double17(ev.time);
    out += ',';
    out += std::to_string(ev.neuron + 1);
    out += ',';
    out += std::to_string(ev.ordinal);
    out += '\n';
  }
  return out;
}

ordered_json fluid_trajectory_to_json(const FluidTrajectory& traj) {
  ordered_json segments = ordered_json::array();
  for (const auto& seg : traj.segments) {
    std::vector<std::size_t> active_1based;
    for (std::size_t i : seg.active) active_1based.push_back(i + 1);
    segments.push_back(ordered_json{{"t_start", seg.t_start},
                                    {"t_end", seg.t_end},
                                    {"phi_start", seg.phi_start},
                                    {"slope", seg.slope},
                                    {"rates", seg.rates},
                                    {"active", active_1based}});
  }
  ordered_json out{{"breakpoints", traj.breakpoints},
                   {"segments", std::move(segments)}};
  switch (traj.status) {
    case FluidStatus::EmptiedAt:
      out["status"] = "emptied-at";
      out["emptied_at"] = traj.emptied_at;
      break;
    case FluidStatus::Diverges:
      out["status"] = "diverges";
      out["divergence_reason"] = traj.divergence_reason;
      out["max_positive_slope"] = traj.max_positive_slope;
      break;
    case FluidStatus::HorizonTruncated:
      out["status"] = "horizon-truncated";
      break;
  }
  return out;
}

namespace {

ordered_json subset_to_json(const SubsetCheck& check) {
  std::vector<std::size_t> subset_1based;
  for (std::size_t i : check.subset) subset_1based.push_back(i + 1);
  return ordered_json{{"subset", subset_1based},
                      {"invertible", check.invertible},
                      {"a", check.a},
                      {"load", check.load},
                      {"budget", check.budget},
                      {"pass", check.pass}};
}

}  // namespace

ordered_json stability_report_to_json(const StabilityReport& report) {
  ordered_json subsets = ordered_json::array();
  for (const auto& check : report.subset_checks)
    subsets.push_back(subset_to_json(check));
  ordered_json out{{"rates", report.rates},
                   {"feasible", report.feasible},
                   {"subset_checks", std::move(subsets)},
                   {"verdict", report.verdict == StabilityVerdict::Stable
                                   ? "stable"
                                   : "partial-risk"}};
  if (report.witness) {
    std::vector<std::size_t> witness_1based;
    for (std::size_t i : *report.witness) witness_1based.push_back(i + 1);
    out["witness"] = witness_1based;
  }
  return out;
}

void render_stability_table(const StabilityReport& report, std::ostream& os) {
  os << "subset          invertible  load        budget      pass\n";
  for (const auto& check : report.subset_checks) {
    std::ostringstream name;
    name << "{";
    for (std::size_t k = 0; k < check.subset.size(); ++k)
      name << (k ? "," : "") << check.subset[k] + 1;
    name << "}";
    os << std::left << std::setw(16) << name.str() << std::setw(12)
       << (check.invertible ? "yes" : "no") << std::setw(12) << check.load
       << std::setw(12) << check.budget << (check.pass ? "pass" : "FAIL")
       << "\n";
  }
  os << "verdict: "
     << (report.verdict == StabilityVerdict::Stable ? "stable" : "partial-risk");
  if (report.witness) {
    os << " (witness {";
    for (std::size_t k = 0; k < report.witness->size(); ++k)
      os << (k ? "," : "") << (*report.witness)[k] + 1;
    os << "})";
  }
  os << "\n";
}

ordered_json check_result_to_json(const CheckResult& result) {
  return ordered_json{{"name", result.name},
                      {"statistic", result.statistic},
                      {"threshold", result.threshold},
                      {"pass", result.pass},
                      {"replicas", result.replicas},
                      {"seed", result.seed},
                      {"details", result.details}};
}

ordered_json check_results_to_json(const std::vector<CheckResult>& results) {
  ordered_json out = ordered_json::array();
  for (const auto& r : results) out.push_back(check_result_to_json(r));
  return out;
}

}  // namespace levyif
