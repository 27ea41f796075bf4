#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyif/fluid_engine.hpp"
#include "levyif/spiking_network.hpp"
#include "levyif/stability_analysis.hpp"
#include "levyif/verification.hpp"

namespace levyif {

/// One JSON object per sample time: t, z, x, clamp, eta.
std::string sim_record_to_jsonl(const SimRecord& rec);

/// Fixed columns time,neuron,ordinal; times with 17 significant digits.
std::string spike_log_to_csv(const SimRecord& rec);

nlohmann::ordered_json fluid_trajectory_to_json(const FluidTrajectory& traj);
nlohmann::ordered_json stability_report_to_json(const StabilityReport& report);
nlohmann::ordered_json check_result_to_json(const CheckResult& result);
nlohmann::ordered_json check_results_to_json(
    const std::vector<CheckResult>& results);

/// One row per evaluated subset.
void render_stability_table(const StabilityReport& report, std::ostream& os);

std::string format_double17(double v);

}  // namespace levyif
