#pragma once

#include <cstdint>

#include "hawkes/claims.hpp"
#include "hawkes/deviations.hpp"
#include "hawkes/sequence.hpp"

namespace hawkes {

// Surplus process: reserve + premium*t - sum of claims drawn at the arrival
// points. The net profit condition is checked at construction and reported,
// not enforced: simulation remains legal without it, the analytic solvers
// refuse.
class RiskModel {
 public:
  RiskModel(double reserve, double premium, ClaimLaw law,
            KernelSequence arrival);

  double reserve() const { return u_; }
  double premium() const { return p_; }
  const ClaimLaw& law() const { return law_; }
  const KernelSequence& arrival() const { return arrival_; }
  double arrival_rate() const { return m_; }   // long-run points per time
  double claim_load() const { return load_; }  // arrival_rate * E[C1]
  bool net_profit() const { return p_ > load_; }

 private:
  double u_;
  double p_;
  ClaimLaw law_;
  KernelSequence arrival_;
  double m_ = 0.0;
  double load_ = 0.0;
};

struct LundbergSolution {
  double theta_dagger = 0.0;
  double net_margin = 0.0;    // premium - claim load (first inequality)
  double light_margin = 0.0;  // gamma_C(theta)/theta - premium at the deepest
                              // finite probe (second inequality)
};

// unique positive root of gamma_C(theta) = premium * theta
LundbergSolution lundberg_exponent(const RiskModel& model);

// knee of the finite-horizon decay rate: 1/(gamma_C'(theta_dagger) - premium)
double ruin_knee(const RiskModel& model);

// decay rate of ruin by time reserve*z: z * rate_IC(1/z + premium) below the
// knee, theta_dagger beyond it
double finite_horizon_rate(const RiskModel& model, double z);

struct HeavyTailAsymptote {
  double constant = 0.0;  // multiplies the integrated-tail complement
  double horizon = 0.0;   // scaled horizon: ruin by time reserve*horizon;
                          // +inf for the unlimited-time constant (the scaled
                          // horizon is written z or T depending on convention)
  ClaimLaw law;

  double operator()(double u) const {
    return constant * law.integrated_tail_complement(u);
  }
};

HeavyTailAsymptote heavy_tail_asymptote(const RiskModel& model,
                                        double horizon);

struct RuinEstimate {
  double psi = 0.0;  // ruin frequency across replicates
  double se = 0.0;   // binomial standard error
  double horizon = 0.0;  // effective simulated horizon (time units)
  double z = 0.0;        // horizon / reserve (NaN when reserve is 0)
  // average bound on ruin mass beyond the horizon, exp(-theta_dagger *
  // final surplus), when the exponent is available; 0 otherwise
  double residual_bound = 0.0;
};

// Finite horizon simulates as given; +inf horizon is legal for light-tailed
// claims under net profit and truncates at
// max(50/(premium - load), 20*reserve/premium) with the residual reported.
RuinEstimate simulate_ruin(const RiskModel& model, double horizon, int n_reps,
                           std::uint64_t seed);

}  // namespace hawkes
