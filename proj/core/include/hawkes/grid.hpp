#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

// Sampled function on the uniform grid {0, dt, 2dt, ...}. The value array
// covers [0, L] with L = (values.size()-1)*dt.
struct GridFunction {
  double dt = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double length() const {
    return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
  }
  double at(std::size_t i) const { return values[i]; }

  // Trapezoid integral over the whole support.
  double l1() const;

  // Linear interpolation; zero outside [0, L].
  double operator()(double t) const;
};

// Trapezoid-rule convolution (f*g)(k dt) = int f(u) g(k dt - u) du. The
// plain discrete sum is corrected by half the two window-edge products,
// which makes the rule exact-trapezoid for every output point including
// those where one support has run out. Requires equal dt.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

// Correlation corr(f,g)(w) = int f(c) g(c + w) dc on the two-sided lag
// window; returns the grid and the index of lag zero.
struct TwoSidedGrid {
  double dt = 0.0;
  std::ptrdiff_t lo = 0;  // lag of values[0] is lo*dt
  std::vector<double> values;

  double lag(std::size_t i) const {
    return dt * static_cast<double>(lo + static_cast<std::ptrdiff_t>(i));
  }
  double at_lag(double w) const;  // linear interpolation, zero outside
  double l1() const;
};

TwoSidedGrid correlate(const GridFunction& f, const TwoSidedGrid& g);
TwoSidedGrid correlate(const GridFunction& f, const GridFunction& g);
TwoSidedGrid convolve(const GridFunction& f, const TwoSidedGrid& g);
TwoSidedGrid to_two_sided(const GridFunction& f);
// Mirror about lag zero: out(w) = f(-w) placed on lags <= 0.
TwoSidedGrid mirror(const GridFunction& f);

// Drop leading/trailing entries with |v| < tol, keeping lag bookkeeping.
void trim(TwoSidedGrid& g, double tol);

}  // namespace hawkes
