#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hawkes/grid.hpp"

namespace hawkes {

// Exciting-function families. All are nonnegative densities on [0, inf)
// scaled by a weight; evaluation is zero for t < 0.

struct Exponential {
  double rate = 1.0;    // beta
  double weight = 1.0;  // alpha; gamma(t) = alpha * exp(-beta t)
};

struct ErlangK {
  int shape = 1;        // k
  double rate = 1.0;    // beta
  double weight = 1.0;  // L1 norm; gamma = weight * Erlang(k, beta) density
};

struct UniformSupport {
  double height = 1.0;  // c
  double length = 1.0;  // L; gamma(t) = c on [0, L], 0 beyond
};

struct Tabulated {
  double dt = 1e-3;
  std::vector<double> values;  // samples on {0, dt, ...}
};

class Kernel {
 public:
  using Family = std::variant<Exponential, ErlangK, UniformSupport, Tabulated>;

  explicit Kernel(Family family);

  const Family& family() const { return family_; }
  std::string family_name() const;

  double value(double t) const;

  // Exact for closed forms, trapezoid for Tabulated.
  double l1_norm() const { return l1_; }

  // H(t) = int_t^inf gamma(s) ds.
  double tail_integral(double t) const;

  // int_0^t gamma(s) ds = l1_norm() - tail_integral(t).
  double cdf_mass(double t) const { return l1_ - tail_integral(t); }

  // int_0^inf t gamma(t) dt.
  double first_moment() const { return first_moment_; }

  // For Tabulated kernels whose sampled tail has not decayed, the first
  // moment cannot be trusted; this flag signals it (never a failure).
  bool first_moment_resolved() const { return moment_resolved_; }

  // Smallest t with tail_integral(t) <= eps * l1_norm(); used to truncate
  // grids. eps defaults to the certified 1e-10 policy in callers.
  double truncation_length(double eps) const;

  // Non-increasing function dominating the kernel pointwise; only
  // closed-form families provide one (std::nullopt for Tabulated).
  std::optional<double> envelope(double t) const;
  bool has_envelope() const;

  // Inverse CDF of the kernel restricted and renormalized to [0, horizon]:
  // returns t with int_0^t gamma = u * cdf_mass(horizon), u in (0,1).
  // Monotone in u; exact for closed forms, grid-interpolated for Tabulated.
  double sample_truncated(double u, double horizon) const;

  // Samples on {0, dt, ..., ceil(trunc/dt)*dt} for the grid engine.
  GridFunction tabulate(double dt, double eps = 1e-10) const;

 private:
  Family family_;
  double l1_ = 0.0;
  double first_moment_ = 0.0;
  bool moment_resolved_ = true;
  std::vector<double> cum_;  // Tabulated only: cumulative trapezoid masses
};

// Background intensity gamma_0(t).
struct ConstantBaseline {
  double rate = 1.0;
};

struct PiecewiseBaseline {
  std::vector<double> breakpoints;  // increasing, breakpoints[0] == 0
  std::vector<double> levels;       // levels[i] on [b_i, b_{i+1}); last
                                    // level extends to infinity
};

class Baseline {
 public:
  using Kind = std::variant<ConstantBaseline, PiecewiseBaseline>;

  explicit Baseline(Kind kind);

  const Kind& kind() const { return kind_; }
  bool is_constant() const;

  double value(double t) const;
  double integral(double t) const;  // int_0^t gamma_0
  double max_level() const;
  // Cesaro mean rate: the constant rate, or the final level.
  double mean_rate() const;

 private:
  Kind kind_;
};

}  // namespace hawkes
