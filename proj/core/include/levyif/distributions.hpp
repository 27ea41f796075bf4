#pragma once

#include <string>

#include "levyif/rng.hpp"

namespace levyif {

enum class DistKind { Constant, Uniform, Exponential, LogNormal };

/// Descriptor of a positive-support law with finite mean. Used both for the
/// jump sizes of the driving noise and for the spike signal matrix entries.
///
/// The menu is fixed: constant(v), uniform(a,b) with 0 < a <= b,
/// exponential(mean), lognormal(mu, sigma2).
class Distribution {
 public:
  static Distribution constant(double value);
  static Distribution uniform(double a, double b);
  static Distribution exponential(double mean);
  static Distribution lognormal(double mu, double sigma2);

  DistKind kind() const noexcept { return kind_; }
  double param_a() const noexcept { return a_; }
  double param_b() const noexcept { return b_; }

  double mean() const noexcept;

  /// Strictly positive sample. Constant laws consume no stream state.
  double sample(RandomStream& rs) const noexcept;

  /// Throws ParameterError unless the law has strictly positive support
  /// and finite mean.
  void validate(const std::string& context = {}) const;

  std::string describe() const;

  bool operator==(const Distribution&) const = default;

 private:
  Distribution(DistKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  DistKind kind_;
  double a_;  // value | lower | mean | mu
  double b_;  // unused | upper | unused | sigma2
};

}  // namespace levyif
