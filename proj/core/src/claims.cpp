#include "hawkes/claims.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <utility>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClaimLaw::ClaimLaw(ClaimFamily f, double a, double b, bool light,
                   std::string name)
    : family_(f), a_(a), b_(b), light_(light), name_(std::move(name)) {}

ClaimLaw ClaimLaw::deterministic(double value) {
  if (!(value > 0.0))
    throw validation_error("ClaimLaw: deterministic value must be > 0");
  return {ClaimFamily::kDeterministic, value, 0.0, true, "deterministic"};
}

ClaimLaw ClaimLaw::exponential(double mean) {
  if (!(mean > 0.0))
    throw validation_error("ClaimLaw: exponential mean must be > 0");
  return {ClaimFamily::kExponential, mean, 0.0, true, "exponential"};
}

ClaimLaw ClaimLaw::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw validation_error("ClaimLaw: gamma shape and scale must be > 0");
  return {ClaimFamily::kGamma, shape, scale, true, "gamma"};
}

ClaimLaw ClaimLaw::pareto(double alpha, double scale) {
  if (!(alpha > 0.0) || !(scale > 0.0))
    throw validation_error("ClaimLaw: pareto alpha and scale must be > 0");
  return {ClaimFamily::kPareto, alpha, scale, false, "pareto"};
}

ClaimLaw ClaimLaw::weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw validation_error("ClaimLaw: weibull shape and scale must be > 0");
  if (shape >= 1.0)
    throw validation_error(
        "ClaimLaw: weibull shape must lie in (0,1); use exponential or gamma "
        "for the light-tailed range");
  return {ClaimFamily::kWeibull, shape, scale, false, "weibull"};
}

ClaimLaw ClaimLaw::log_normal(double mu, double sigma) {
  if (!(sigma > 0.0))
    throw validation_error("ClaimLaw: log-normal sigma must be > 0");
  return {ClaimFamily::kLogNormal, mu, sigma, false, "log_normal"};
}

double ClaimLaw::mean() const {
  switch (family_) {
    case ClaimFamily::kDeterministic:
    case ClaimFamily::kExponential:
      return a_;
    case ClaimFamily::kGamma:
      return a_ * b_;
    case ClaimFamily::kPareto:
      return a_ > 1.0 ? a_ * b_ / (a_ - 1.0) : kInf;
    case ClaimFamily::kWeibull:
      return b_ * std::tgamma(1.0 + 1.0 / a_);
    case ClaimFamily::kLogNormal:
      return std::exp(a_ + 0.5 * b_ * b_);
  }
  return 0.0;
}

double ClaimLaw::mgf_sup() const {
  switch (family_) {
    case ClaimFamily::kDeterministic:
      return kInf;
    case ClaimFamily::kExponential:
      return 1.0 / a_;
    case ClaimFamily::kGamma:
      return 1.0 / b_;
    default:
      return 0.0;
  }
}

double ClaimLaw::log_mgf(double theta) const {
  if (theta == 0.0) return 0.0;
  switch (family_) {
    case ClaimFamily::kDeterministic:
      return theta * a_;
    case ClaimFamily::kExponential:
      return theta * a_ < 1.0 ? -std::log1p(-theta * a_) : kInf;
    case ClaimFamily::kGamma:
      return theta * b_ < 1.0 ? -a_ * std::log1p(-theta * b_) : kInf;
    default:
      break;
  }
  if (theta > 0.0) return kInf;
  // heavy tails, theta < 0: E[exp(theta C)] = int_0^1 exp(theta Q(u)) du
  boost::math::quadrature::tanh_sinh<double> quad;
  const double value = quad.integrate(
      [&](double u) {
        const double q = quantile(u);
        return std::isfinite(q) ? std::exp(theta * q) : 0.0;
      },
      0.0, 1.0, 1e-12);
  return std::log(value);
}

double ClaimLaw::quantile(double u) const {
  if (!(u >= 0.0) || u >= 1.0)
    throw validation_error("ClaimLaw: quantile argument must lie in [0,1)");
  switch (family_) {
    case ClaimFamily::kDeterministic:
      return a_;
    case ClaimFamily::kExponential:
      return -a_ * std::log1p(-u);
    case ClaimFamily::kGamma:
      return b_ * boost::math::gamma_p_inv(a_, u);
    case ClaimFamily::kPareto:
      return b_ * std::pow(1.0 - u, -1.0 / a_);
    case ClaimFamily::kWeibull:
      return b_ * std::pow(-std::log1p(-u), 1.0 / a_);
    case ClaimFamily::kLogNormal:
      return std::exp(a_ +
                      b_ * std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0));
  }
  return 0.0;
}

double ClaimLaw::tail(double x) const {
  if (x < 0.0) return 1.0;
  switch (family_) {
    case ClaimFamily::kDeterministic:
      return x < a_ ? 1.0 : 0.0;
    case ClaimFamily::kExponential:
      return std::exp(-x / a_);
    case ClaimFamily::kGamma:
      return boost::math::gamma_q(a_, x / b_);
    case ClaimFamily::kPareto:
      return x <= b_ ? 1.0 : std::pow(b_ / x, a_);
    case ClaimFamily::kWeibull:
      return std::exp(-std::pow(x / b_, a_));
    case ClaimFamily::kLogNormal:
      return x == 0.0
                 ? 1.0
                 : 0.5 * std::erfc((std::log(x) - a_) / (b_ * std::sqrt(2.0)));
  }
  return 0.0;
}

double ClaimLaw::integrated_tail_complement(double x) const {
  if (x < 0.0) x = 0.0;
  switch (family_) {
    case ClaimFamily::kPareto: {
      if (a_ <= 1.0)
        throw validation_error(
            "ClaimLaw: integrated tail needs a finite mean (pareto alpha > 1)");
      if (x >= b_) return std::pow(b_ / x, a_ - 1.0) / a_;
      return ((b_ - x) * (a_ - 1.0) + b_) / (a_ * b_);
    }
    case ClaimFamily::kWeibull: {
      boost::math::quadrature::exp_sinh<double> quad;
      const double raw =
          quad.integrate([&](double t) { return tail(x + t); }, 1e-10);
      return raw / mean();
    }
    default:
      throw validation_error(
          "ClaimLaw: integrated tail is provided for the heavy-tailed "
          "families pareto and weibull");
  }
}

}  // namespace hawkes
