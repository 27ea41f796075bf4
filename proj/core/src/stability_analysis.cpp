#include "levyif/stability_analysis.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "levyif/errors.hpp"

namespace levyif {

Vec closed_form_rates(const Vec& h, const Vec& w, double nu) {
  if (h.size() != w.size() || h.empty())
    throw ParameterError("closed_form_rates: H and w must be nonempty and equal-sized");
  if (!std::isfinite(nu) || nu <= 0.0)
    throw ParameterError("closed_form_rates: nu must be > 0");
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(w[i] > 0.0) || !(h[i] > w[i]))
      throw ParameterError("closed_form_rates: requires H > w > 0");
    s += w[i] / (h[i] - w[i]);
  }
  Vec r(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    r[i] = nu / ((h[i] - w[i]) * (1.0 + s));
  return r;
}

namespace {

void validate_positive_square(const Mat& b, const Vec& nu) {
  if (b.rows() == 0 || b.rows() != b.cols())
    throw ParameterError("mean matrix must be square and nonempty");
  if (nu.size() != b.rows())
    throw ParameterError("nu size does not match mean matrix");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!std::isfinite(b(i, j)) || b(i, j) <= 0.0)
        throw ParameterError("mean matrix entries must be strictly positive");
  for (double v : nu)
    if (!std::isfinite(v) || v <= 0.0)
      throw ParameterError("nu entries must be > 0");
}

}  // namespace

SteadyRates steady_rates(const Mat& b, const Vec& nu) {
  validate_positive_square(b, nu);
  // x B = nu, i.e. B^T x = nu
  auto sol = solve_linear(b.transposed(), nu);
  if (!sol) throw RankError("steady_rates: singular mean matrix");
  SteadyRates out;
  out.x = std::move(*sol);
  out.feasible = true;
  for (double v : out.x)
    if (!(v > 0.0)) out.feasible = false;
  return out;
}

StabilityReport check_partial_stability(const Mat& b, const Vec& nu) {
  validate_positive_square(b, nu);
  const std::size_t n = b.rows();
  if (n > kMaxSubsetNeurons)
    throw SizeError("check_partial_stability: N > 20 subset enumeration refused");

  StabilityReport report;
  try {
    SteadyRates sr = steady_rates(b, nu);
    report.rates = sr.x;
    report.feasible = sr.feasible;
  } catch (const RankError&) {
    report.feasible = false;
  }

  bool all_pass = true;
  const std::uint32_t full = 1u << n;
  for (std::uint32_t mask = 1; mask + 1 < full; ++mask) {
    SubsetCheck check;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) check.subset.push_back(i);

    const auto& s = check.subset;
    Mat sys(s.size(), s.size());
    Vec rhs(s.size());
    for (std::size_t p = 0; p < s.size(); ++p) {
      for (std::size_t q = 0; q < s.size(); ++q) sys(p, q) = b(s[q], s[p]);
      rhs[p] = nu[s[p]];
    }
    auto sol = solve_linear(std::move(sys), std::move(rhs));

    check.a.assign(n, 0.0);
    bool positive = true;
    if (sol) {
      check.invertible = true;
      for (std::size_t q = 0; q < s.size(); ++q) {
        check.a[s[q]] = (*sol)[q];
        if (!((*sol)[q] > 0.0)) positive = false;
      }
    }

    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      check.budget += nu[j];
      for (std::size_t i : s) check.load += check.a[i] * b(i, j);
    }
    check.pass = check.invertible && positive && check.load < check.budget;

    if (!check.pass && all_pass) {
      all_pass = false;
      report.witness = check.subset;
    }
    report.subset_checks.push_back(std::move(check));
  }

  report.verdict = (all_pass && report.feasible) ? StabilityVerdict::Stable
                                                 : StabilityVerdict::PartialRisk;
  return report;
}

}  // namespace levyif
