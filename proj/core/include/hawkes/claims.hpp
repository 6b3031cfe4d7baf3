#pragma once

#include <string>

namespace hawkes {

enum class ClaimFamily {
  kDeterministic,
  kExponential,
  kGamma,
  kPareto,
  kWeibull,
  kLogNormal,
};

// Claim-size distributions for the surplus process. light_tailed() marks the
// families whose moment generating function is finite on a right-neighborhood
// of zero; the heavy families report +inf for every theta > 0.
class ClaimLaw {
 public:
  static ClaimLaw deterministic(double value);
  static ClaimLaw exponential(double mean);
  static ClaimLaw gamma(double shape, double scale);
  // density alpha * scale^alpha / x^(alpha+1) on [scale, inf)
  static ClaimLaw pareto(double alpha, double scale);
  // shape restricted to (0,1): that is the heavy-tailed regime (shape >= 1
  // is covered by exponential/gamma on the light side)
  static ClaimLaw weibull(double shape, double scale);
  static ClaimLaw log_normal(double mu, double sigma);

  ClaimFamily family() const { return family_; }
  const std::string& family_name() const { return name_; }
  bool light_tailed() const { return light_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  double mean() const;  // +inf for pareto with alpha <= 1
  // log E[exp(theta * C)]; +inf outside the MGF domain
  double log_mgf(double theta) const;
  // right end of the MGF domain (+inf for deterministic, 0 for heavy laws)
  double mgf_sup() const;
  double quantile(double u) const;  // inverse CDF, u in [0, 1)
  double tail(double x) const;      // P(C > x)
  // complement of the integrated-tail CDF: (1/E[C]) * int_x^inf tail(y) dy;
  // closed form for pareto, quadrature for weibull
  double integrated_tail_complement(double x) const;

 private:
  ClaimLaw(ClaimFamily f, double a, double b, bool light, std::string name);

  ClaimFamily family_;
  double a_;
  double b_;
  bool light_;
  std::string name_;
};

}  // namespace hawkes
