#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "levyif/linear_solve.hpp"

namespace levyif {

/// Long-run spike rates under the symmetric configuration
/// b_ii = H_i > w_i = b_ij (j != i), common drift nu:
///   rate_i = nu / ((H_i - w_i) * (1 + sum_k w_k/(H_k - w_k))).
Vec closed_form_rates(const Vec& h, const Vec& w, double nu);

/// Solution of x B = nu. `feasible` iff the solve succeeded with all
/// components strictly positive. Throws RankError when B is singular.
struct SteadyRates {
  Vec x;
  bool feasible = false;
};

SteadyRates steady_rates(const Mat& b, const Vec& nu);

/// One sufficient-condition evaluation for a proper subset S: the restricted
/// rates a^S (solving sum_{i in S} a_i b_ij = nu_j, j in S), the inhibition
/// the stabilized subset exports, and the drift budget of the complement.
struct SubsetCheck {
  std::vector<std::size_t> subset;  // 0-based indices
  bool invertible = false;
  Vec a;                            // dense, zero off S
  double load = 0.0;                // sum_{i in S} a_i sum_{j not in S} b_ij
  double budget = 0.0;              // sum_{j not in S} nu_j
  bool pass = false;                // invertible && a > 0 on S && load < budget
};

enum class StabilityVerdict { Stable, PartialRisk };

struct StabilityReport {
  Vec rates;                         // empty when the full solve is singular
  bool feasible = false;             // steady rates exist and are positive
  std::vector<SubsetCheck> subset_checks;
  StabilityVerdict verdict = StabilityVerdict::PartialRisk;
  std::optional<std::vector<std::size_t>> witness;  // first failing subset
};

/// Enumerates every nonempty proper subset (N <= 20) and combines the
/// subset conditions with steady-rate feasibility. `Stable` means the
/// sufficient conditions hold; `PartialRisk` means some condition fails,
/// not that instability is proved.
StabilityReport check_partial_stability(const Mat& b, const Vec& nu);

inline constexpr std::size_t kMaxSubsetNeurons = 20;

}  // namespace levyif
