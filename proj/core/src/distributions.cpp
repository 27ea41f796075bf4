#include "levyif/distributions.hpp"

#include <cmath>
#include <sstream>

#include "levyif/errors.hpp"

namespace levyif {

Distribution Distribution::constant(double value) {
  return Distribution(DistKind::Constant, value, 0.0);
}

Distribution Distribution::uniform(double a, double b) {
  return Distribution(DistKind::Uniform, a, b);
}

Distribution Distribution::exponential(double mean) {
  return Distribution(DistKind::Exponential, mean, 0.0);
}

Distribution Distribution::lognormal(double mu, double sigma2) {
  return Distribution(DistKind::LogNormal, mu, sigma2);
}

double Distribution::mean() const noexcept {
  switch (kind_) {
    case DistKind::Constant:
      return a_;
    case DistKind::Uniform:
      return 0.5 * (a_ + b_);
    case DistKind::Exponential:
      return a_;
    case DistKind::LogNormal:
      return std::exp(a_ + 0.5 * b_);
  }
  return 0.0;
}

double Distribution::sample(RandomStream& rs) const noexcept {
  switch (kind_) {
    case DistKind::Constant:
      return a_;
    case DistKind::Uniform:
      return a_ + (b_ - a_) * rs.uniform();
    case DistKind::Exponential:
      return rs.exponential(a_);
    case DistKind::LogNormal:
      return std::exp(a_ + std::sqrt(b_) * rs.gaussian());
  }
  return a_;
}

void Distribution::validate(const std::string& context) const {
  auto fail = [&](const std::string& what) {
    throw ParameterError(context.empty() ? what : context + ": " + what);
  };
  switch (kind_) {
    case DistKind::Constant:
      if (!std::isfinite(a_) || a_ <= 0.0) fail("constant value must be > 0");
      break;
    case DistKind::Uniform:
      if (!std::isfinite(a_) || !std::isfinite(b_) || a_ <= 0.0 || b_ < a_)
        fail("uniform law requires 0 < a <= b");
      break;
    case DistKind::Exponential:
      if (!std::isfinite(a_) || a_ <= 0.0) fail("exponential mean must be > 0");
      break;
    case DistKind::LogNormal:
      if (!std::isfinite(a_) || !std::isfinite(b_) || b_ < 0.0)
        fail("lognormal requires finite mu and sigma2 >= 0");
      break;
  }
}

std::string Distribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DistKind::Constant:
      os << "constant(" << a_ << ")";
      break;
    case DistKind::Uniform:
      os << "uniform(" << a_ << ", " << b_ << ")";
      break;
    case DistKind::Exponential:
      os << "exponential(" << a_ << ")";
      break;
    case DistKind::LogNormal:
      os << "lognormal(" << a_ << ", " << b_ << ")";
      break;
  }
  return os.str();
}

}  // namespace levyif
