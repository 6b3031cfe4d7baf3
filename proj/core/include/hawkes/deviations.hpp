#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "hawkes/analytics.hpp"
#include "hawkes/claims.hpp"
#include "hawkes/sequence.hpp"

namespace hawkes {

struct CriticalTheta {
  double value = 0.0;
  // the finite-domain bracket ran past the cap without finding divergence;
  // the cumulant is finite at least up to `value`
  bool at_cap = false;
};

// Limiting cumulant of the count: gamma(theta) = rate * (exp(f) - 1) where f
// is the depth limit of the nested norm recursion, evaluated at depths
// aligned with the kernel cycle so the iterates stay monotone. +inf marks
// divergence past the critical theta.
class CumulantModel {
 public:
  explicit CumulantModel(KernelSequence seq, double tol = 1e-12,
                         double divergence_cap = 50.0);

  const KernelSequence& sequence() const { return seq_; }
  double tol() const { return tol_; }

  double f_limit(double theta) const;      // +inf when divergent
  double gamma(double theta) const;        // memoized; +inf propagates
  double gamma_prime(double theta) const;  // central difference
  CriticalTheta theta_c() const;           // cached

  static constexpr double kThetaCap = 64.0;

 private:
  double f_solve(double theta) const;

  // cache behind a pointer so the model itself stays movable
  struct Cache {
    std::mutex mu;
    std::map<double, double> gamma;
    std::optional<CriticalTheta> theta_c;
  };

  KernelSequence seq_;
  double tol_;
  double cap_;
  std::unique_ptr<Cache> cache_;
};

// minimal root of x = theta + rho*(e^x - 1); defined for
// theta <= rho - 1 - log(rho), rejects theta past the tangency
double min_root(double theta, double rho);

// large-deviation rate of the count: sup_theta { theta*x - gamma(theta) };
// +inf for x < 0, baseline rate at x = 0
double rate_I(const CumulantModel& model, double x);

// cumulant of the claim-marked count: gamma(log E[exp(theta C)])
double gamma_C(const CumulantModel& model, const ClaimLaw& law, double theta);

// edge of the finite domain of gamma_C
CriticalTheta composed_theta_c(const CumulantModel& model, const ClaimLaw& law);

double rate_IC(const CumulantModel& model, const ClaimLaw& law, double x);

// moderate-deviation rate x^2 / (2 sigma^2)
double rate_J(const LimitConstants& constants, double x);

struct EmpiricalCumulant {
  double value = 0.0;
  double se = 0.0;  // jackknife standard error
};

// (1/t) log of the replication average of exp(theta * N_t), max-shifted
EmpiricalCumulant empirical_cumulant(const KernelSequence& seq, double theta,
                                     double t, int n_reps, std::uint64_t seed);

}  // namespace hawkes
