#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hawkes/analytics.hpp"
#include "hawkes/event_log.hpp"
#include "hawkes/grid.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/sequence.hpp"

namespace hawkes {

// Stationary pair-correlation densities of the generation processes,
//   rho(i, j, t - s) = E[N^i(dt) N^j(ds)] / (dt ds),
// stored uncentered on a uniform lag grid covering (-L, L) for
// 0 <= i <= j <= n_max. The missing half follows from
// rho(i, j, w) = rho(j, i, -w).
class CovarianceTable {
 public:
  double dt() const { return dt_; }
  double max_lag() const { return max_lag_; }
  int n_max() const { return n_max_; }
  Extension extension() const { return extension_; }

  // Weight bound on the discarded pairs with i or j beyond n_max:
  // rate^2 * (n_max + 2) * rho^n_max / (1 - rho)^2.
  double truncation_bound() const { return truncation_bound_; }
  // Bound on sum of the per-generation mean rates beyond n_max.
  double rate_tail_bound() const { return rate_tail_; }

  // Mean rate of generation i (background rate times the norm product).
  double rate(int i) const;

  const TwoSidedGrid& entry(int i, int j) const;  // requires i <= j
  // Interpolated density at signed lag w; accepts i > j via reflection.
  double value(int i, int j, double w) const;

  // Rows "i,j,lag,value" over the stored grid.
  void write_csv(std::ostream& os) const;

 private:
  friend CovarianceTable covariance_table(const KernelSequence&, int, double,
                                          double);
  double dt_ = 0.0;
  double max_lag_ = 0.0;
  int n_max_ = 0;
  Extension extension_ = Extension::kNull;
  double truncation_bound_ = 0.0;
  double rate_tail_ = 0.0;
  std::vector<double> rates_;
  std::vector<TwoSidedGrid> entries_;  // upper triangle, row-major
};

// Evaluates the pair-correlation recursions on the grid. Kernel supports are
// truncated at relative tail mass 1e-10; the same-generation tables come out
// even in the lag by construction. Requires a constant baseline and
// L >= 2x the longest kernel truncation length.
CovarianceTable covariance_table(const KernelSequence& seq, int n_max,
                                 double dt, double L);

// Window second moments of the two price legs over [0, tau].
struct SecondMoments {
  double var1 = 0.0;       // E[(X^1_tau)^2]
  double var2 = 0.0;       // E[(X^2_tau)^2]
  double cross = 0.0;      // E[X^1_tau X^2_tau]
  double tail_bound = 0.0; // what generations beyond the table could add
};

// Diagonal terms rate_i * tau plus signed double integrals of the table
// entries over [0, tau]^2 (tensorized trapezoid on the table grid).
// Classes 1/2 carry the +/- legs of X^1, classes 3/4 those of X^2.
// Requires tau <= L/2 so every needed lag is tabulated.
SecondMoments analytic_second_moments(const CovarianceTable& table,
                                      const PartitionSpec& part, double tau);

// C(tau) = E[(X^1_tau)^2] / tau.
double analytic_signature(const CovarianceTable& table,
                          const PartitionSpec& part, double tau);
// rho(tau) = Cov(X^1, X^2) / sqrt(Var(X^1) Var(X^2)) for stationary window
// increments of width tau; NaN if a leg has no generations assigned.
double analytic_correlation(const CovarianceTable& table,
                            const PartitionSpec& part, double tau);

// Tick path X^1 = N_{class 1} - N_{class 2} (and X^2 = N_3 - N_4 when the
// partition has four classes). X starts at 0 and jumps by +/-1 at events.
class PricePath {
 public:
  // The extension tells how generations past the class list map to classes,
  // mirroring partition_lln.
  PricePath(EventLog log, const PartitionSpec& part, Extension ext);

  const EventLog& log() const { return log_; }
  const PartitionSpec& partition() const { return part_; }
  double horizon() const { return log_.horizon; }

  // Step values just after time t.
  double x1(double t) const;
  double x2(double t) const;

  // Increments over the floor(T/tau) full windows of width tau.
  void window_increments(double tau, std::vector<double>* d1,
                         std::vector<double>* d2) const;

 private:
  EventLog log_;
  PartitionSpec part_;
  std::vector<int> px1_, px2_;  // prefix sums of jumps, px[k] = X after k events
};

struct CurvePoint {
  double tau = 0.0;
  double value = 0.0;  // NaN when !defined
  double se = 0.0;
  bool defined = true;
};

// Realized variance (1/(n tau)) sum (X_{(k+1)tau} - X_{k tau})^2 per path,
// averaged across paths with its standard error. The normalization equals
// 1/T whenever tau divides the horizon; a tau with no complete window marks
// the point undefined.
std::vector<CurvePoint> signature_plot(const std::vector<PricePath>& paths,
                                       const std::vector<double>& taus);

// Per-path correlation of the window increments of X^1 and X^2, averaged
// across the paths where the denominator is positive; undefined when no
// path produces one. Requires four-class partitions.
std::vector<CurvePoint> epps_curve(const std::vector<PricePath>& paths,
                                   const std::vector<double>& taus);

// "tau,empirical,se,analytic" rows; the analytic column comes from the
// caller, NaN printed as "nan".
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve,
                     const std::vector<double>& analytic);

// Near-stationary window: simulates on (0, B + T] with warmup
// B = 10x the longest kernel truncation length, then shifts time by -B and
// keeps (0, T]. Generation labels survive the shift, but ancestry is cut at
// the window edge, so EventLog::validate does not apply to the result.
EventLog simulate_warm(const KernelSequence& seq, double T,
                       const RngStream& rng, double tol,
                       double* warmup = nullptr);

}  // namespace hawkes
