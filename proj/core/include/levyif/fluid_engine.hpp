#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "levyif/linear_solve.hpp"

namespace levyif {

/// Spike rates of the deterministic fluid model for a given active set A
/// (coordinates pinned at 0). Solves sum_{j in A} b_{ji} r_j = nu_i for
/// i in A; rates vanish off A. `feasible` is false when some solved rate
/// is negative, which signals the partial-stability regime.
struct FluidRates {
  Vec rates;
  bool feasible = true;
};

FluidRates fluid_rates(const std::vector<std::size_t>& active, const Mat& b,
                       const Vec& nu);

/// Drift of the fluid trajectory: 0 on the active set, otherwise
/// -nu_i + sum_{j in A} b_{ji} r_j.
Vec fluid_slopes(const std::vector<std::size_t>& active, const Vec& rates,
                 const Mat& b, const Vec& nu);

enum class FluidStatus { EmptiedAt, Diverges, HorizonTruncated };

struct FluidSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Vec phi_start;
  Vec slope;
  Vec rates;
  std::vector<std::size_t> active;
};

/// Piecewise-linear fluid trajectory. Coordinates that reach 0 join the
/// active set and stay there; the trajectory is continuous and nonnegative.
struct FluidTrajectory {
  std::vector<double> breakpoints;  // starts at 0
  std::vector<FluidSegment> segments;
  FluidStatus status = FluidStatus::HorizonTruncated;
  double emptied_at = -1.0;        // valid when status == EmptiedAt
  std::string divergence_reason;   // valid when status == Diverges
  double max_positive_slope = 0.0; // offending slope when diverging

  Vec value_at(double t) const;
};

/// Event-driven integration of the fluid model from phi0 >= 0. Terminates
/// with EmptiedAt when all coordinates sit at 0, Diverges when the active
/// set produces an infeasible rate vector or a positive off-active slope,
/// and HorizonTruncated otherwise.
FluidTrajectory integrate_fluid(const Vec& phi0, const Mat& b, const Vec& nu,
                                double horizon);

/// Time bound (1 + sum_k w_k/(H_k - w_k)) / nu within which every unit-norm
/// start empties under the symmetric configuration.
double symmetric_emptying_bound(const Vec& h, const Vec& w, double nu);

inline constexpr double kActiveTol = 1e-12;
inline constexpr double kBreakpointTieTol = 1e-12;

}  // namespace levyif
