#include "hawkes/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hawkes/errors.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {
namespace {

constexpr double kTailEps = 1e-10;  // kernel truncation policy of the module

// Crop or zero-pad to the lag-index window [lo, hi].
TwoSidedGrid window(const TwoSidedGrid& g, std::ptrdiff_t lo,
                    std::ptrdiff_t hi) {
  TwoSidedGrid out;
  out.dt = g.dt;
  out.lo = lo;
  out.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const std::ptrdiff_t ghi = g.lo + static_cast<std::ptrdiff_t>(g.values.size()) - 1;
  const std::ptrdiff_t s = std::max(lo, g.lo);
  const std::ptrdiff_t e = std::min(hi, ghi);
  for (std::ptrdiff_t k = s; k <= e; ++k)
    out.values[static_cast<std::size_t>(k - lo)] =
        g.values[static_cast<std::size_t>(k - g.lo)];
  return out;
}

TwoSidedGrid zero_window(double dt, std::ptrdiff_t half) {
  TwoSidedGrid out;
  out.dt = dt;
  out.lo = -half;
  out.values.assign(static_cast<std::size_t>(2 * half + 1), 0.0);
  return out;
}

// Correlation restricted to the lags whose quadrature window stays inside
// the stored extent of g; beyond it the unstored tail would read as zero.
TwoSidedGrid corr_valid(const GridFunction& f, const TwoSidedGrid& g) {
  if (g.values.size() < f.values.size())
    throw numerical_error("covariance_table: lag window shorter than a kernel");
  TwoSidedGrid full = correlate(f, g);
  const std::ptrdiff_t hi =
      g.lo + static_cast<std::ptrdiff_t>(g.values.size() - f.values.size());
  return window(full, g.lo, hi);
}

// Convolution restricted the same way (left edge is the exposed one).
TwoSidedGrid conv_valid(const GridFunction& f, const TwoSidedGrid& g) {
  if (g.values.size() < f.values.size())
    throw numerical_error("covariance_table: lag window shorter than a kernel");
  TwoSidedGrid full = convolve(f, g);
  const std::ptrdiff_t lo =
      g.lo + static_cast<std::ptrdiff_t>(f.values.size()) - 1;
  const std::ptrdiff_t hi =
      g.lo + static_cast<std::ptrdiff_t>(g.values.size()) - 1;
  return window(full, lo, hi);
}

void add_scaled(TwoSidedGrid& acc, const TwoSidedGrid& g, double scale) {
  const std::ptrdiff_t ahi =
      acc.lo + static_cast<std::ptrdiff_t>(acc.values.size()) - 1;
  const std::ptrdiff_t ghi =
      g.lo + static_cast<std::ptrdiff_t>(g.values.size()) - 1;
  const std::ptrdiff_t s = std::max(acc.lo, g.lo);
  const std::ptrdiff_t e = std::min(ahi, ghi);
  for (std::ptrdiff_t k = s; k <= e; ++k)
    acc.values[static_cast<std::size_t>(k - acc.lo)] +=
        scale * g.values[static_cast<std::size_t>(k - g.lo)];
}

bool all_zero(const TwoSidedGrid& g) {
  return std::all_of(g.values.begin(), g.values.end(),
                     [](double v) { return v == 0.0; });
}

std::size_t tri_index(int n_max, int i, int j) {
  const auto ii = static_cast<std::size_t>(i);
  const auto jj = static_cast<std::size_t>(j);
  const auto rows = static_cast<std::size_t>(n_max) + 1;
  return ii * rows - ii * (ii - 1) / 2 + (jj - ii);
}

// Signs of generation g on the two legs given the class label.
int leg1_sign(int cls) { return cls == 1 ? 1 : (cls == 2 ? -1 : 0); }
int leg2_sign(int cls) { return cls == 3 ? 1 : (cls == 4 ? -1 : 0); }

void check_partition(const PartitionSpec& part) {
  if (part.classes.empty())
    throw validation_error("partition class list must be nonempty");
  if (part.d < 1 || part.d > 4)
    throw validation_error("price partitions use at most four classes");
  for (int c : part.classes)
    if (c < 1 || c > part.d)
      throw validation_error("partition class labels must lie in 1..d");
}

// int_0^tau int_0^tau f(s-u) ds du for f(w) = table value of the pair
// (i, j): tensorized trapezoid over the partition {0, dt, .., n dt, tau}
// collapsed along the diagonal, O(n) per pair.
double tri_integral(const CovarianceTable& tab, int i, int j, double tau) {
  const double dt = tab.dt();
  auto f = [&](double w) { return tab.value(i, j, w); };
  auto n = static_cast<std::size_t>(tau / dt * (1.0 + 1e-12) + 1e-12);
  double frac = tau - static_cast<double>(n) * dt;
  if (frac <= 1e-9 * dt) frac = 0.0;
  if (n == 0) {
    if (frac == 0.0) return 0.0;
    return 0.25 * frac * frac * (2.0 * f(0.0) + f(frac) + f(-frac));
  }
  // uniform block over {0, .., n dt}: the weight autocorrelation is
  // (n - 1/2) at lag 0, (n - k) at 0 < k < n, 1/4 at k = n
  double s = (static_cast<double>(n) - 0.5) * f(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double w = static_cast<double>(k) * dt;
    s += static_cast<double>(n - k) * (f(w) + f(-w));
  }
  {
    const double w = static_cast<double>(n) * dt;
    s += 0.25 * (f(w) + f(-w));
  }
  s *= dt * dt;
  if (frac > 0.0) {
    // the end cell [n dt, tau] adds frac/2 on both of its nodes
    const double en = 0.5 * frac;
    const double xn = static_cast<double>(n) * dt;
    for (std::size_t a = 0; a <= n; ++a) {
      const double ua = (a == 0 || a == n) ? 0.5 * dt : dt;
      const double xa = static_cast<double>(a) * dt;
      s += ua * en * (f(xa - xn) + f(xn - xa));
      s += ua * en * (f(xa - tau) + f(tau - xa));
    }
    s += en * en * 2.0 * f(0.0);
    s += en * en * (f(-frac) + f(frac));
  }
  return s;
}

}  // namespace

double CovarianceTable::rate(int i) const {
  if (i < 0 || i > n_max_) throw std::out_of_range("CovarianceTable::rate");
  return rates_[static_cast<std::size_t>(i)];
}

const TwoSidedGrid& CovarianceTable::entry(int i, int j) const {
  if (i < 0 || j < i || j > n_max_)
    throw std::out_of_range("CovarianceTable::entry");
  return entries_[tri_index(n_max_, i, j)];
}

double CovarianceTable::value(int i, int j, double w) const {
  if (i > j) return value(j, i, -w);
  return entry(i, j).at_lag(w);
}

void CovarianceTable::write_csv(std::ostream& os) const {
  os << "i,j,lag,value\n";
  os << std::fixed << std::setprecision(9);
  for (int i = 0; i <= n_max_; ++i)
    for (int j = i; j <= n_max_; ++j) {
      const TwoSidedGrid& g = entry(i, j);
      for (std::size_t k = 0; k < g.values.size(); ++k)
        os << i << ',' << j << ',' << g.lag(k) << ',' << g.values[k] << '\n';
    }
}

CovarianceTable covariance_table(const KernelSequence& seq, int n_max,
                                 double dt, double L) {
  if (!seq.baseline().is_constant())
    throw validation_error(
        "covariance_table: stationary pair correlations need a constant "
        "baseline; piecewise backgrounds are rejected");
  if (n_max < 0) throw validation_error("covariance_table: n_max must be >= 0");
  if (!(dt > 0.0)) throw validation_error("covariance_table: dt must be > 0");
  const double longest = seq.max_truncation_length(kTailEps);
  if (!(L > 0.0) || L < 2.0 * longest - 1e-12 * std::max(1.0, longest))
    throw validation_error(
        "covariance_table: max lag L must be at least twice the longest "
        "kernel truncation length");

  CovarianceTable out;
  out.dt_ = dt;
  out.n_max_ = n_max;
  out.extension_ = seq.extension();
  const double g0 = seq.baseline().mean_rate();
  const double rho = seq.rho();
  out.truncation_bound_ = g0 * g0 * (static_cast<double>(n_max) + 2.0) *
                          std::pow(rho, n_max) / ((1.0 - rho) * (1.0 - rho));

  out.rates_.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  out.rates_[0] = g0;
  for (int i = 1; i <= n_max; ++i)
    out.rates_[static_cast<std::size_t>(i)] =
        out.rates_[static_cast<std::size_t>(i - 1)] *
        seq.norm_at(static_cast<std::size_t>(i));
  out.rate_tail_ = out.rates_.back() * rho / (1.0 - rho);

  // one tabulation per distinct explicit kernel
  std::vector<GridFunction> tabs(seq.explicit_kernels().size());
  std::vector<const GridFunction*> ktab(static_cast<std::size_t>(n_max) + 1,
                                        nullptr);
  for (int g = 1; g <= n_max; ++g) {
    const std::size_t idx = seq.explicit_index_at(static_cast<std::size_t>(g));
    if (idx == KernelSequence::npos) continue;
    if (tabs[idx].values.empty())
      tabs[idx] = seq.explicit_kernels()[idx].tabulate(dt, kTailEps);
    ktab[static_cast<std::size_t>(g)] = &tabs[idx];
  }

  // lag-index bookkeeping: entries live on [-li, li]; the working grid for
  // generation i keeps the extra right extent the later correlations will
  // consume, v[i] = li + sum_{g>i} (kernel support cells of g)
  const auto li = static_cast<std::ptrdiff_t>(L / dt + 1e-9);
  std::vector<std::ptrdiff_t> v(static_cast<std::size_t>(n_max) + 1, li);
  for (int i = n_max - 1; i >= 0; --i) {
    const GridFunction* k = ktab[static_cast<std::size_t>(i) + 1];
    const auto cells =
        k ? static_cast<std::ptrdiff_t>(k->values.size()) - 1 : 0;
    v[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i) + 1] + cells;
  }
  if (2 * v[0] + 1 > (1 << 23))
    throw config_error(
        "covariance_table: working lag grid exceeds 2^23 points; increase dt "
        "or reduce L / n_max");

  const double mem =
      0.5 * static_cast<double>(n_max + 1) * static_cast<double>(n_max + 2) *
      static_cast<double>(2 * li + 1);
  if (mem > static_cast<double>(1 << 27))
    throw config_error(
        "covariance_table: stored entries exceed 2^27 values; increase dt or "
        "reduce L / n_max");

  out.entries_.resize(tri_index(n_max, n_max, n_max) + 1);

  // centered same-generation table c(i,i) on [-v[i], v[i]]; c(0,0) = 0
  TwoSidedGrid w = zero_window(dt, v[0]);
  bool w_known_zero = true;
  for (int i = 0; i <= n_max; ++i) {
    if (i > 0) {
      const GridFunction* k = ktab[static_cast<std::size_t>(i)];
      if (k == nullptr) {
        w = zero_window(dt, v[static_cast<std::size_t>(i)]);
        w_known_zero = true;
      } else {
        TwoSidedGrid next;
        if (!w_known_zero)
          next = conv_valid(*k, corr_valid(*k, w));
        else
          next = zero_window(dt, v[static_cast<std::size_t>(i)]);
        next = window(next, -v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(i)]);
        // same-parent atom: rate_{i-1} * int gamma_i(c) gamma_i(c+w) dc
        add_scaled(next, correlate(*k, *k),
                   out.rates_[static_cast<std::size_t>(i - 1)]);
        w = std::move(next);
        w_known_zero = all_zero(w);
      }
    }
    const double ri = out.rates_[static_cast<std::size_t>(i)];
    {
      TwoSidedGrid stored = window(w, -li, li);
      for (double& x : stored.values) x += ri * ri;  // uncenter
      out.entries_[tri_index(n_max, i, i)] = std::move(stored);
    }
    // cross tables of the row: c(i,j) = corr(gamma_j, c(i,j-1)), plus the
    // parent-child atom rate_i * gamma_{i+1}(-w) on the adjacent pair
    TwoSidedGrid p = w;
    for (int j = i + 1; j <= n_max; ++j) {
      const GridFunction* k = ktab[static_cast<std::size_t>(j)];
      if (k == nullptr) {
        p = zero_window(dt, li);
      } else {
        p = corr_valid(*k, p);
        if (p.lo < -li)
          p = window(p, -li,
                     p.lo + static_cast<std::ptrdiff_t>(p.values.size()) - 1);
        if (j == i + 1) {
          // parent-child atom: lives on w < 0 only, so the table jumps at
          // lag zero; storing the midpoint there keeps the trapezoid rule
          // second order across the jump
          TwoSidedGrid atom = mirror(*k);
          atom.values.back() *= 0.5;
          add_scaled(p, atom, ri);
        }
      }
      TwoSidedGrid stored = window(p, -li, li);
      const double rj = out.rates_[static_cast<std::size_t>(j)];
      for (double& x : stored.values) x += ri * rj;
      out.entries_[tri_index(n_max, i, j)] = std::move(stored);
    }
  }
  out.max_lag_ = static_cast<double>(li) * dt;
  return out;
}

SecondMoments analytic_second_moments(const CovarianceTable& table,
                                      const PartitionSpec& part, double tau) {
  check_partition(part);
  if (tau < 0.0)
    throw validation_error("analytic_second_moments: tau must be >= 0");
  if (tau > 0.5 * table.max_lag() * (1.0 + 1e-12))
    throw validation_error(
        "analytic_second_moments: tau must stay within half the tabulated "
        "lag range");
  SecondMoments mom;
  if (tau == 0.0) return mom;

  const int n = table.n_max();
  std::vector<int> s1(static_cast<std::size_t>(n) + 1),
      s2(static_cast<std::size_t>(n) + 1);
  for (int g = 0; g <= n; ++g) {
    const int cls =
        partition_class(part, table.extension(), static_cast<std::size_t>(g));
    s1[static_cast<std::size_t>(g)] = leg1_sign(cls);
    s2[static_cast<std::size_t>(g)] = leg2_sign(cls);
  }
  for (int g = 0; g <= n; ++g) {
    if (s1[static_cast<std::size_t>(g)] != 0) mom.var1 += table.rate(g) * tau;
    if (s2[static_cast<std::size_t>(g)] != 0) mom.var2 += table.rate(g) * tau;
  }
  for (int g = 0; g <= n; ++g)
    for (int h = g; h <= n; ++h) {
      const int a1 = s1[static_cast<std::size_t>(g)],
                b1 = s1[static_cast<std::size_t>(h)];
      const int a2 = s2[static_cast<std::size_t>(g)],
                b2 = s2[static_cast<std::size_t>(h)];
      int w11 = a1 * b1, w22 = a2 * b2;
      int w12 = a1 * b2, w21 = b1 * a2;
      if (g != h) {
        w11 *= 2;
        w22 *= 2;
      } else {
        w21 = 0;  // the (g,g) term appears once
      }
      if (w11 == 0 && w22 == 0 && w12 == 0 && w21 == 0) continue;
      const double iv = tri_integral(table, g, h, tau);
      mom.var1 += w11 * iv;
      mom.var2 += w22 * iv;
      mom.cross += (w12 + w21) * iv;
    }
  mom.tail_bound =
      tau * table.rate_tail_bound() + tau * tau * table.truncation_bound();
  return mom;
}

double analytic_signature(const CovarianceTable& table,
                          const PartitionSpec& part, double tau) {
  if (!(tau > 0.0))
    throw validation_error("analytic_signature: tau must be > 0");
  return analytic_second_moments(table, part, tau).var1 / tau;
}

double analytic_correlation(const CovarianceTable& table,
                            const PartitionSpec& part, double tau) {
  if (!(tau > 0.0))
    throw validation_error("analytic_correlation: tau must be > 0");
  const SecondMoments mom = analytic_second_moments(table, part, tau);
  // the table stores raw pair densities, so the moments above are about
  // zero, not about the drift; subtract the signed leg means to get the
  // Pearson correlation of the window increments
  double mu1 = 0.0, mu2 = 0.0;
  for (int g = 0; g <= table.n_max(); ++g) {
    const int cls =
        partition_class(part, table.extension(), static_cast<std::size_t>(g));
    mu1 += leg1_sign(cls) * table.rate(g) * tau;
    mu2 += leg2_sign(cls) * table.rate(g) * tau;
  }
  const double v1 = mom.var1 - mu1 * mu1;
  const double v2 = mom.var2 - mu2 * mu2;
  const double denom = v1 * v2;
  if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (mom.cross - mu1 * mu2) / std::sqrt(denom);
}

PricePath::PricePath(EventLog log, const PartitionSpec& part, Extension ext)
    : log_(std::move(log)), part_(part) {
  check_partition(part_);
  if (part_.d != 2 && part_.d != 4)
    throw validation_error("price paths need a two- or four-class partition");
  px1_.reserve(log_.events.size() + 1);
  px2_.reserve(log_.events.size() + 1);
  px1_.push_back(0);
  px2_.push_back(0);
  int c1 = 0, c2 = 0;
  for (const Event& e : log_.events) {
    const int cls =
        partition_class(part_, ext, static_cast<std::size_t>(e.generation));
    c1 += leg1_sign(cls);
    c2 += leg2_sign(cls);
    px1_.push_back(c1);
    px2_.push_back(c2);
  }
}

double PricePath::x1(double t) const {
  const auto it = std::upper_bound(
      log_.events.begin(), log_.events.end(), t,
      [](double lhs, const Event& e) { return lhs < e.time; });
  return px1_[static_cast<std::size_t>(it - log_.events.begin())];
}

double PricePath::x2(double t) const {
  const auto it = std::upper_bound(
      log_.events.begin(), log_.events.end(), t,
      [](double lhs, const Event& e) { return lhs < e.time; });
  return px2_[static_cast<std::size_t>(it - log_.events.begin())];
}

void PricePath::window_increments(double tau, std::vector<double>* d1,
                                  std::vector<double>* d2) const {
  if (!(tau > 0.0)) throw validation_error("window width tau must be > 0");
  const auto n_win = static_cast<std::size_t>(
      log_.horizon / tau * (1.0 + 1e-12) + 1e-12);
  if (d1) d1->assign(n_win, 0.0);
  if (d2) d2->assign(n_win, 0.0);
  std::size_t p = 0;
  int prev1 = 0, prev2 = 0;
  for (std::size_t k = 1; k <= n_win; ++k) {
    const double b = tau * static_cast<double>(k);
    while (p < log_.events.size() && log_.events[p].time <= b) ++p;
    if (d1) {
      (*d1)[k - 1] = px1_[p] - prev1;
      prev1 = px1_[p];
    }
    if (d2) {
      (*d2)[k - 1] = px2_[p] - prev2;
      prev2 = px2_[p];
    }
  }
}

std::vector<CurvePoint> signature_plot(const std::vector<PricePath>& paths,
                                       const std::vector<double>& taus) {
  if (paths.empty())
    throw validation_error("signature_plot: at least one path required");
  std::vector<CurvePoint> curve;
  curve.reserve(taus.size());
  std::vector<double> d1;
  for (double tau : taus) {
    if (!(tau > 0.0))
      throw validation_error("signature_plot: tau grid must be positive");
    std::vector<double> vals;
    vals.reserve(paths.size());
    for (const PricePath& path : paths) {
      path.window_increments(tau, &d1, nullptr);
      if (d1.empty()) continue;
      double s = 0.0;
      for (double x : d1) s += x * x;
      vals.push_back(s / (static_cast<double>(d1.size()) * tau));
    }
    CurvePoint pt;
    pt.tau = tau;
    if (vals.empty()) {
      pt.defined = false;
      pt.value = std::numeric_limits<double>::quiet_NaN();
    } else {
      pt.value = stats::mean(vals);
      pt.se = vals.size() > 1
                  ? std::sqrt(stats::sample_variance(vals) /
                              static_cast<double>(vals.size()))
                  : 0.0;
    }
    curve.push_back(pt);
  }
  return curve;
}

std::vector<CurvePoint> epps_curve(const std::vector<PricePath>& paths,
                                   const std::vector<double>& taus) {
  if (paths.empty())
    throw validation_error("epps_curve: at least one path required");
  for (const PricePath& path : paths)
    if (path.partition().d != 4)
      throw validation_error(
          "epps_curve: needs the four-class partition carrying both legs");
  std::vector<CurvePoint> curve;
  curve.reserve(taus.size());
  std::vector<double> d1, d2;
  for (double tau : taus) {
    if (!(tau > 0.0))
      throw validation_error("epps_curve: tau grid must be positive");
    std::vector<double> vals;
    vals.reserve(paths.size());
    for (const PricePath& path : paths) {
      path.window_increments(tau, &d1, &d2);
      if (d1.empty()) continue;
      const double m1 = stats::mean(d1), m2 = stats::mean(d2);
      double c1 = 0.0, c2 = 0.0, c12 = 0.0;
      for (std::size_t k = 0; k < d1.size(); ++k) {
        c1 += (d1[k] - m1) * (d1[k] - m1);
        c2 += (d2[k] - m2) * (d2[k] - m2);
        c12 += (d1[k] - m1) * (d2[k] - m2);
      }
      if (!(c1 > 0.0) || !(c2 > 0.0)) continue;  // no variation on a leg
      const double r = c12 / std::sqrt(c1 * c2);
      vals.push_back(std::clamp(r, -1.0, 1.0));
    }
    CurvePoint pt;
    pt.tau = tau;
    if (vals.empty()) {
      pt.defined = false;  // zero denominator on every path
      pt.value = std::numeric_limits<double>::quiet_NaN();
    } else {
      pt.value = stats::mean(vals);
      pt.se = vals.size() > 1
                  ? std::sqrt(stats::sample_variance(vals) /
                              static_cast<double>(vals.size()))
                  : 0.0;
    }
    curve.push_back(pt);
  }
  return curve;
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve,
                     const std::vector<double>& analytic) {
  if (!analytic.empty() && analytic.size() != curve.size())
    throw validation_error("curve and analytic column sizes differ");
  os << "tau,empirical,se,analytic\n";
  os << std::fixed << std::setprecision(9);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    os << curve[k].tau << ',' << curve[k].value << ',' << curve[k].se << ',';
    if (analytic.empty())
      os << "nan";
    else
      os << analytic[k];
    os << '\n';
  }
}

EventLog simulate_warm(const KernelSequence& seq, double T,
                       const RngStream& rng, double tol, double* warmup) {
  if (!(T > 0.0)) throw validation_error("simulate_warm: horizon must be > 0");
  const double b = 10.0 * seq.max_truncation_length(kTailEps);
  EventLog full = simulate_branching(seq, b + T, rng, tol);
  EventLog out;
  out.horizon = T;
  out.truncation_generation = full.truncation_generation;
  out.truncation_bound = full.truncation_bound;
  for (const Event& e : full.events)
    if (e.time > b) out.events.push_back({e.time - b, e.generation});
  if (warmup) *warmup = b;
  return out;
}

}  // namespace hawkes
