#include <doctest.h>

#include <cmath>

#include "levyif/errors.hpp"
#include "levyif/fluid_engine.hpp"
#include "levyif/rng.hpp"
#include "levyif/stability_analysis.hpp"

using namespace levyif;

namespace {

const Mat kPartialRiskB = Mat::from_rows({{8.0, 2.0, 6.0},
                                       {2.0, 8.0, 6.0},
                                       {6.0, 6.0, 8.0}});

Mat symmetric_matrix(const Vec& h, const Vec& w) {
  Mat b(h.size(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) b(i, j) = i == j ? h[i] : w[i];
  return b;
}

}  // namespace

TEST_CASE("closed form collapses to nu/H for a single neuron") {
  for (double w : {0.1, 1.0, 1.9})
    CHECK(closed_form_rates({2.0}, {w}, 1.0)[0] ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed form for the homogeneous three-neuron network") {
  const Vec r = closed_form_rates({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}, 1.0);
  for (double v : r) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("closed form for heterogeneous thresholds") {
  const Vec r = closed_form_rates({3.0, 2.0}, {1.0, 1.0}, 1.0);
  CHECK(r[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("closed form rejects H <= w") {
  CHECK_THROWS_AS(closed_form_rates({1.0}, {1.0}, 1.0), ParameterError);
}

TEST_CASE("steady rates: scalar case") {
  const SteadyRates sr = steady_rates(Mat::from_rows({{5.0}}), {2.0});
  CHECK(sr.feasible);
  CHECK(sr.x[0] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("steady rates of the counterexample matrix are infeasible") {
  const SteadyRates sr = steady_rates(kPartialRiskB, {1.0, 1.0, 1.0});
  CHECK_FALSE(sr.feasible);
  CHECK(sr.x[0] == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(sr.x[1] == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(sr.x[2] == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("closed form and linear solve agree on random symmetric networks") {
  RandomStream rs(555);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + std::size_t(rs.uniform() * 8.0);
    Vec h(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.2 + 1.8 * rs.uniform();
      h[i] = w[i] * (1.0 + 1e-3 + 8.999 * rs.uniform());  // H in (w, 10w]
    }
    const double nu = 0.3 + 2.7 * rs.uniform();
    const Vec closed = closed_form_rates(h, w, nu);
    const Mat b = symmetric_matrix(h, w);
    const SteadyRates sr = steady_rates(b, Vec(n, nu));
    REQUIRE(sr.feasible);

    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(sr.x[i] - closed[i]) <= 1e-10 * closed[i]);
      m += w[i] * sr.x[i] / nu;
    }
    // the inhibition fraction M stays below one
    CHECK(m < 1.0);

    // residual of the solved system
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += sr.x[i] * b(i, j);
      CHECK(std::abs(acc - nu) <= 1e-9 * nu);
    }
  }
}

TEST_CASE("subset conditions flag the counterexample pair") {
  const StabilityReport report =
      check_partial_stability(kPartialRiskB, {1.0, 1.0, 1.0});
  CHECK(report.verdict == StabilityVerdict::PartialRisk);
  REQUIRE(report.witness.has_value());
  CHECK(*report.witness == std::vector<std::size_t>{0, 1});

  bool found = false;
  for (const auto& check : report.subset_checks) {
    if (check.subset != std::vector<std::size_t>{0, 1}) continue;
    found = true;
    CHECK(check.invertible);
    CHECK(check.a[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(check.a[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(check.load == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(check.budget == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(check.pass);
  }
  CHECK(found);
}

TEST_CASE("weakening the third column restores stability") {
  Mat b = kPartialRiskB;
  b(0, 2) = 2.0;
  b(1, 2) = 2.0;
  const StabilityReport report = check_partial_stability(b, {1.0, 1.0, 1.0});
  CHECK(report.verdict == StabilityVerdict::Stable);
  CHECK(report.feasible);
  for (const auto& check : report.subset_checks) CHECK(check.pass);
}

TEST_CASE("homogeneous symmetric network passes every subset") {
  const Mat b = symmetric_matrix({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});
  const StabilityReport report = check_partial_stability(b, {1.0, 1.0, 1.0});
  CHECK(report.verdict == StabilityVerdict::Stable);
  for (const auto& check : report.subset_checks) {
    CHECK(check.pass);
    if (check.subset == std::vector<std::size_t>{0, 1}) {
      CHECK(check.a[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
      CHECK(check.load == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
      CHECK(check.budget == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("single neuron has no proper subsets") {
  const StabilityReport report =
      check_partial_stability(Mat::from_rows({{2.0}}), {1.0});
  CHECK(report.subset_checks.empty());
  CHECK(report.verdict == StabilityVerdict::Stable);
}

TEST_CASE("subset enumeration refuses oversized networks") {
  const std::size_t n = 21;
  Mat b(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) b(i, i) = 2.0;
  CHECK_THROWS_AS(check_partial_stability(b, Vec(n, 1.0)), SizeError);
}

TEST_CASE("stable verdict implies the fluid model empties") {
  RandomStream rs(808);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + std::size_t(rs.uniform() * 4.0);
    Vec h(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.2 + 1.8 * rs.uniform();
      h[i] = w[i] * (1.2 + 7.0 * rs.uniform());
    }
    const double nu = 0.5 + 2.0 * rs.uniform();
    const Mat b = symmetric_matrix(h, w);
    const StabilityReport report = check_partial_stability(b, Vec(n, nu));
    REQUIRE(report.verdict == StabilityVerdict::Stable);

    const double bound = symmetric_emptying_bound(h, w, nu);
    for (int k = 0; k < 4; ++k) {
      Vec phi0(n);
      double total = 0.0;
      for (auto& x : phi0) total += (x = rs.exponential(1.0));
      for (auto& x : phi0) x /= total;
      const FluidTrajectory traj =
          integrate_fluid(phi0, b, Vec(n, nu), bound + 1.0);
      CHECK(traj.status == FluidStatus::EmptiedAt);
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(steady_rates(Mat::from_rows({{1.0, 0.0}, {1.0, 1.0}}),
                               {1.0, 1.0}),
                  ParameterError);  // nonpositive entry
  CHECK_THROWS_AS(steady_rates(Mat::from_rows({{1.0}}), {0.0}),
                  ParameterError);
  CHECK_THROWS_AS(
      steady_rates(Mat::from_rows({{1.0, 1.0}, {1.0, 1.0}}), {1.0, 1.0}),
      RankError);
}
