#include "hawkes/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "hawkes/analytics.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RiskModel::RiskModel(double reserve, double premium, ClaimLaw law,
                     KernelSequence arrival)
    : u_(reserve), p_(premium), law_(std::move(law)),
      arrival_(std::move(arrival)) {
  if (u_ < 0.0) throw validation_error("RiskModel: reserve must be >= 0");
  if (!(p_ > 0.0)) throw validation_error("RiskModel: premium must be > 0");
  m_ = limit_constants(arrival_, 1e-12).m;
  load_ = m_ * law_.mean();
}

namespace {

struct Solved {
  CumulantModel cm;
  LundbergSolution sol;
};

Solved solve_exponent(const RiskModel& model) {
  if (!model.law().light_tailed())
    throw validation_error(
        "lundberg_exponent: needs a light-tailed claim law (" +
        model.law().family_name() + " is heavy-tailed)");
  if (!model.net_profit()) {
    std::ostringstream msg;
    msg << "lundberg_exponent: net profit condition fails: premium "
        << model.premium() << " must exceed the claim load "
        << model.claim_load();
    throw validation_error(msg.str());
  }

  Solved s{CumulantModel(model.arrival()), {}};
  const ClaimLaw& law = model.law();
  const double p = model.premium();
  const auto G = [&](double th) { return gamma_C(s.cm, law, th) - p * th; };

  const CriticalTheta edge = composed_theta_c(s.cm, law);
  // probe toward the edge for a point where the cumulant beats the premium
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= 60; ++k) {
    const double th =
        k == 0 ? edge.value
               : edge.value - std::pow(2.0, -k) * std::max(1.0, edge.value);
    if (th <= 0.0) continue;
    const double v = G(th);
    if (std::isfinite(v) && v > 0.0) {
      hi = th;
      break;
    }
  }
  if (!std::isfinite(hi)) {
    std::ostringstream msg;
    msg << "lundberg_exponent: premium too high for a positive exponent: "
        << "gamma_C(theta)/theta never exceeds premium " << p
        << " on the finite domain (edge near " << edge.value
        << "); the second inequality of the light-tail condition fails";
    throw validation_error(msg.str());
  }
  s.sol.light_margin = G(hi) / hi;  // gamma_C(th)/th - p at the probe

  double lo = hi;
  for (int i = 0; i < 200 && G(lo) > 0.0; ++i) lo /= 2.0;
  while (hi - lo > 1e-14 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (G(mid) > 0.0 ? hi : lo) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  if (!(std::abs(G(theta)) < 1e-10))
    throw numerical_error("lundberg_exponent: residual above 1e-10");
  s.sol.theta_dagger = theta;
  s.sol.net_margin = p - model.claim_load();
  return s;
}

double gamma_C_prime(const Solved& s, const ClaimLaw& law, double theta) {
  const double h = 1e-6 * std::max(1.0, theta);
  const double a = gamma_C(s.cm, law, theta - h);
  const double b = gamma_C(s.cm, law, theta + h);
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return (b - a) / (2.0 * h);
}

double knee_of(const Solved& s, const RiskModel& model) {
  const double gp = gamma_C_prime(s, model.law(), s.sol.theta_dagger);
  if (!std::isfinite(gp) || gp <= model.premium()) return kInf;
  return 1.0 / (gp - model.premium());
}

}  // namespace

LundbergSolution lundberg_exponent(const RiskModel& model) {
  return solve_exponent(model).sol;
}

double ruin_knee(const RiskModel& model) {
  const Solved s = solve_exponent(model);
  return knee_of(s, model);
}

double finite_horizon_rate(const RiskModel& model, double z) {
  if (!(z > 0.0)) throw validation_error("finite_horizon_rate: z must be > 0");
  const Solved s = solve_exponent(model);
  if (z >= knee_of(s, model)) return s.sol.theta_dagger;
  return z * rate_IC(s.cm, model.law(), 1.0 / z + model.premium());
}

HeavyTailAsymptote heavy_tail_asymptote(const RiskModel& model,
                                        double horizon) {
  const ClaimLaw& law = model.law();
  if (law.light_tailed())
    throw validation_error(
        "heavy_tail_asymptote: needs a heavy-tailed claim law (" +
        law.family_name() + " is light-tailed)");
  if (law.family() != ClaimFamily::kPareto &&
      law.family() != ClaimFamily::kWeibull)
    throw validation_error(
        "heavy_tail_asymptote: supported heavy families are pareto "
        "(polynomial tails) and weibull (stretched-exponential tails)");
  if (!std::isfinite(law.mean()))
    throw validation_error("heavy_tail_asymptote: claim mean must be finite");
  if (!model.net_profit()) {
    std::ostringstream msg;
    msg << "heavy_tail_asymptote: net profit condition fails: premium "
        << model.premium() << " must exceed the claim load "
        << model.claim_load();
    throw validation_error(msg.str());
  }
  if (!(horizon > 0.0))
    throw validation_error("heavy_tail_asymptote: horizon must be > 0");

  const double load = model.claim_load();
  const double base = load / (model.premium() - load);
  double factor = 1.0;
  if (std::isfinite(horizon)) {
    const double drift = 1.0 - load / model.premium();
    if (law.family() == ClaimFamily::kPareto) {
      const double alpha = law.param_a();
      factor = 1.0 - std::pow(1.0 + drift * horizon / alpha, -alpha);
    } else {
      factor = -std::expm1(-drift * horizon);
    }
  }
  return {base * factor, horizon, law};
}

RuinEstimate simulate_ruin(const RiskModel& model, double horizon, int n_reps,
                           std::uint64_t seed) {
  if (n_reps < 1)
    throw validation_error("simulate_ruin: n_reps must be >= 1");
  if (!(horizon > 0.0))
    throw validation_error("simulate_ruin: horizon must be > 0");

  const double p = model.premium();
  const double u = model.reserve();
  double t_end = horizon;
  bool report_residual = false;
  double theta_dagger = 0.0;
  if (!std::isfinite(horizon)) {
    if (!model.law().light_tailed())
      throw validation_error(
          "simulate_ruin: heavy-tailed claims need a finite horizon");
    if (!model.net_profit())
      throw validation_error(
          "simulate_ruin: unlimited horizon needs the net profit condition; "
          "pass a finite horizon to probe the divergent regime");
    t_end = std::max(50.0 / (p - model.claim_load()), 20.0 * u / p);
    try {
      theta_dagger = lundberg_exponent(model).theta_dagger;
      report_residual = true;
    } catch (const validation_error&) {
      // exponent unavailable: the truncation stands unbounded
    }
  }

  int ruined = 0;
  double residual_sum = 0.0;
  for (int r = 0; r < n_reps; ++r) {
    const auto stream = static_cast<std::uint64_t>(2 * r);
    const EventLog log =
        simulate_branching(model.arrival(), t_end, RngStream{seed, stream},
                           1e-9);
    PhiloxEngine claims = RngStream{seed, stream + 1}.engine();
    double paid = 0.0;
    bool hit = false;
    for (const Event& ev : log.events) {
      paid += model.law().quantile(claims.uniform());
      if (u + p * ev.time - paid <= 0.0) {
        hit = true;
        break;
      }
    }
    if (hit) {
      ++ruined;
    } else if (report_residual) {
      const double surplus = u + p * t_end - paid;
      residual_sum += std::exp(-theta_dagger * std::max(surplus, 0.0));
    }
  }

  RuinEstimate out;
  const auto n = static_cast<double>(n_reps);
  out.psi = static_cast<double>(ruined) / n;
  out.se = std::sqrt(out.psi * (1.0 - out.psi) / n);
  out.horizon = t_end;
  out.z = u > 0.0 ? t_end / u : std::numeric_limits<double>::quiet_NaN();
  out.residual_bound = report_residual ? residual_sum / n : 0.0;
  return out;
}

}  // namespace hawkes
