#include "levyif/levy_driver.hpp"

#include <algorithm>
#include <cmath>

#include "levyif/errors.hpp"

namespace levyif {

void LevySpec::validate(const std::string& context) const {
  auto fail = [&](const std::string& what) {
    throw ParameterError(context.empty() ? what : context + ": " + what);
  };
  if (!std::isfinite(nu) || nu <= 0.0) fail("nu must be finite and > 0");
  if (!std::isfinite(sigma) || sigma < 0.0)
    fail("sigma must be finite and >= 0");
  if (!std::isfinite(jump_rate) || jump_rate < 0.0)
    fail("jump_rate must be finite and >= 0");
  if (jump_rate > 0.0) {
    if (!jump_law) fail("jump_law is required when jump_rate > 0");
    jump_law->validate(context.empty() ? "jump_law" : context + ".jump_law");
  }
}

void sample_increment_into(const LevySpec& spec, double dt, RandomStream& rs,
                           Increment& out) {
  if (!std::isfinite(dt) || dt <= 0.0)
    throw ParameterError("sample_increment: dt must be finite and > 0");

  out.continuous = spec.continuous_drift() * dt;
  if (spec.sigma > 0.0)
    out.continuous += spec.sigma * std::sqrt(dt) * rs.gaussian();

  out.jumps.clear();
  if (spec.jump_rate > 0.0) {
    const std::uint64_t count = rs.poisson(spec.jump_rate * dt);
    out.jumps.resize(count);
    for (auto& j : out.jumps) j.offset = dt * rs.uniform();
    for (auto& j : out.jumps) j.size = spec.jump_law->sample(rs);
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const Jump& a, const Jump& b) { return a.offset < b.offset; });
  }
}

Increment sample_increment(const LevySpec& spec, double dt, RandomStream& rs) {
  Increment inc;
  sample_increment_into(spec, dt, rs, inc);
  return inc;
}

double crossing_probability(double z_start, double z_end, double sigma,
                            double dt) {
  if (!std::isfinite(dt) || dt <= 0.0)
    throw ParameterError("crossing_probability: dt must be finite and > 0");
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw ParameterError("crossing_probability: sigma must be >= 0");
  if (z_start <= 0.0 || z_end <= 0.0) return 1.0;
  if (sigma == 0.0) return 0.0;
  return std::exp(-2.0 * z_start * z_end / (sigma * sigma * dt));
}

}  // namespace levyif
