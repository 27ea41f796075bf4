#include "levyif/fluid_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyif/errors.hpp"

namespace levyif {

namespace {

std::string active_set_name(const std::vector<std::size_t>& active) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < active.size(); ++k)
    os << (k ? "," : "") << active[k] + 1;
  os << "}";
  return os.str();
}

void validate_system(const Mat& b, const Vec& nu) {
  if (b.rows() != b.cols()) throw ParameterError("mean matrix must be square");
  if (nu.size() != b.rows())
    throw ParameterError("nu size does not match mean matrix");
  for (double v : nu)
    if (!std::isfinite(v) || v <= 0.0)
      throw ParameterError("nu entries must be > 0");
}

}  // namespace

FluidRates fluid_rates(const std::vector<std::size_t>& active, const Mat& b,
                       const Vec& nu) {
  validate_system(b, nu);
  const std::size_t m = active.size();
  FluidRates out;
  out.rates.assign(nu.size(), 0.0);
  if (m == 0) return out;

  // unknowns r_{active[q]}, equations indexed by i = active[p]:
  //   sum_q b(active[q], active[p]) r_q = nu(active[p])
  Mat sys(m, m);
  Vec rhs(m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) sys(p, q) = b(active[q], active[p]);
    rhs[p] = nu[active[p]];
  }
  auto sol = solve_linear(std::move(sys), std::move(rhs));
  if (!sol)
    throw RankError("fluid_rates: singular system for active set " +
                    active_set_name(active));
  for (std::size_t q = 0; q < m; ++q) {
    out.rates[active[q]] = (*sol)[q];
    if ((*sol)[q] < 0.0) out.feasible = false;
  }
  return out;
}

Vec fluid_slopes(const std::vector<std::size_t>& active, const Vec& rates,
                 const Mat& b, const Vec& nu) {
  validate_system(b, nu);
  const std::size_t n = nu.size();
  std::vector<char> in_active(n, 0);
  for (std::size_t i : active) in_active[i] = 1;

  Vec slope(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_active[i]) continue;
    double s = -nu[i];
    for (std::size_t j : active) s += b(j, i) * rates[j];
    slope[i] = s;
  }
  return slope;
}

Vec FluidTrajectory::value_at(double t) const {
  if (segments.empty()) return {};
  const FluidSegment* seg = &segments.back();
  for (const auto& s : segments) {
    if (t <= s.t_end) {
      seg = &s;
      break;
    }
  }
  const double dt = std::min(t, seg->t_end) - seg->t_start;
  Vec v = seg->phi_start;
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::max(0.0, v[i] + seg->slope[i] * std::max(0.0, dt));
  return v;
}

FluidTrajectory integrate_fluid(const Vec& phi0, const Mat& b, const Vec& nu,
                                double horizon) {
  validate_system(b, nu);
  const std::size_t n = nu.size();
  if (phi0.size() != n) throw ParameterError("phi0 size mismatch");
  for (double v : phi0)
    if (!std::isfinite(v) || v < 0.0)
      throw ParameterError("phi0 must be nonnegative");
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw ParameterError("horizon must be > 0");

  FluidTrajectory traj;
  traj.breakpoints.push_back(0.0);

  Vec phi = phi0;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i)
    if (phi[i] <= kActiveTol) {
      phi[i] = 0.0;
      active.push_back(i);
    }

  double t = 0.0;
  while (true) {
    FluidRates fr = fluid_rates(active, b, nu);
    Vec slope = fluid_slopes(active, fr.rates, b, nu);

    FluidSegment seg;
    seg.t_start = t;
    seg.phi_start = phi;
    seg.slope = slope;
    seg.rates = fr.rates;
    seg.active = active;

    if (!fr.feasible) {
      seg.t_end = horizon;
      traj.segments.push_back(std::move(seg));
      traj.status = FluidStatus::Diverges;
      traj.divergence_reason =
          "infeasible rates on active set " + active_set_name(active);
      return traj;
    }

    double worst_up = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (phi[i] > 0.0) worst_up = std::max(worst_up, slope[i]);
    if (worst_up > kActiveTol) {
      seg.t_end = horizon;
      traj.segments.push_back(std::move(seg));
      traj.status = FluidStatus::Diverges;
      traj.divergence_reason = "positive drift off active set " +
                               active_set_name(active);
      traj.max_positive_slope = worst_up;
      return traj;
    }

    if (active.size() == n) {
      seg.t_end = horizon;
      traj.segments.push_back(std::move(seg));
      traj.status = FluidStatus::EmptiedAt;
      traj.emptied_at = t;
      return traj;
    }

    // earliest hit of 0 among draining coordinates
    double dt_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (phi[i] > 0.0 && slope[i] < -kActiveTol)
        dt_min = std::min(dt_min, phi[i] / -slope[i]);

    if (!std::isfinite(dt_min) || t + dt_min >= horizon) {
      const double dt = horizon - t;
      seg.t_end = horizon;
      traj.segments.push_back(std::move(seg));
      for (std::size_t i = 0; i < n; ++i)
        phi[i] = std::max(0.0, phi[i] + slope[i] * dt);
      traj.status = FluidStatus::HorizonTruncated;
      return traj;
    }

    seg.t_end = t + dt_min;
    traj.segments.push_back(std::move(seg));

    for (std::size_t i = 0; i < n; ++i) {
      if (phi[i] <= 0.0) continue;
      const double hit =
          slope[i] < -kActiveTol ? phi[i] / -slope[i]
                                 : std::numeric_limits<double>::infinity();
      phi[i] += slope[i] * dt_min;
      if (hit <= dt_min + kBreakpointTieTol) {
        phi[i] = 0.0;
        active.push_back(i);
      } else {
        phi[i] = std::max(phi[i], 0.0);
      }
    }
    std::sort(active.begin(), active.end());
    t += dt_min;
    traj.breakpoints.push_back(t);
  }
}

double symmetric_emptying_bound(const Vec& h, const Vec& w, double nu) {
  if (h.size() != w.size()) throw ParameterError("H/w size mismatch");
  if (nu <= 0.0) throw ParameterError("nu must be > 0");
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > w[i]) || !(w[i] > 0.0))
      throw ParameterError("symmetric bound requires H > w > 0");
    s += w[i] / (h[i] - w[i]);
  }
  return (1.0 + s) / nu;
}

}  // namespace levyif
