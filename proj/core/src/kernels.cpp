#include "hawkes/kernels.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {
namespace {

double erlang_density(const ErlangK& k, double t) {
  if (t < 0.0) return 0.0;
  // beta^k t^{k-1} e^{-beta t} / (k-1)!
  double logd = k.shape * std::log(k.rate) - k.rate * t -
                std::lgamma(static_cast<double>(k.shape));
  if (k.shape > 1) logd += (k.shape - 1) * std::log(t > 0.0 ? t : 0.0);
  if (k.shape > 1 && t == 0.0) return 0.0;
  return std::exp(logd);
}

double erlang_mode(const ErlangK& k) {
  return static_cast<double>(k.shape - 1) / k.rate;
}

}  // namespace

Kernel::Kernel(Family family) : family_(std::move(family)) {
  if (const auto* e = std::get_if<Exponential>(&family_)) {
    if (e->rate <= 0.0 || e->weight < 0.0)
      throw validation_error("Exponential kernel: rate must be > 0, weight >= 0");
    l1_ = e->weight / e->rate;
    first_moment_ = e->weight / (e->rate * e->rate);
  } else if (const auto* k = std::get_if<ErlangK>(&family_)) {
    if (k->shape < 1 || k->rate <= 0.0 || k->weight < 0.0)
      throw validation_error("ErlangK kernel: shape >= 1, rate > 0, weight >= 0");
    l1_ = k->weight;
    first_moment_ = k->weight * static_cast<double>(k->shape) / k->rate;
  } else if (const auto* u = std::get_if<UniformSupport>(&family_)) {
    if (u->height < 0.0 || u->length <= 0.0)
      throw validation_error("UniformSupport kernel: height >= 0, length > 0");
    l1_ = u->height * u->length;
    first_moment_ = 0.5 * u->height * u->length * u->length;
  } else {
    const auto& t = std::get<Tabulated>(family_);
    if (t.dt <= 0.0 || t.values.size() < 2)
      throw validation_error("Tabulated kernel: dt > 0 and >= 2 samples required");
    double peak = 0.0;
    for (double v : t.values) {
      if (v < 0.0) throw validation_error("Tabulated kernel: negative sample");
      peak = std::max(peak, v);
    }
    cum_.resize(t.values.size(), 0.0);
    for (std::size_t i = 1; i < t.values.size(); ++i)
      cum_[i] = cum_[i - 1] + 0.5 * (t.values[i - 1] + t.values[i]) * t.dt;
    l1_ = cum_.back();
    double fm = 0.0;
    for (std::size_t i = 1; i < t.values.size(); ++i) {
      const double t0 = (i - 1) * t.dt, t1 = i * t.dt;
      fm += 0.5 * (t0 * t.values[i - 1] + t1 * t.values[i]) * t.dt;
    }
    first_moment_ = fm;
    // A sampled tail that has not decayed means the moment integral is
    // dominated by the unseen region.
    moment_resolved_ = t.values.back() <= 1e-8 * peak;
  }
}

std::string Kernel::family_name() const {
  switch (family_.index()) {
    case 0: return "exponential";
    case 1: return "erlang";
    case 2: return "uniform";
    default: return "tabulated";
  }
}

double Kernel::value(double t) const {
  if (t < 0.0) return 0.0;
  if (const auto* e = std::get_if<Exponential>(&family_))
    return e->weight * std::exp(-e->rate * t);
  if (const auto* k = std::get_if<ErlangK>(&family_))
    return k->weight * erlang_density(*k, t);
  if (const auto* u = std::get_if<UniformSupport>(&family_))
    return t <= u->length ? u->height : 0.0;
  const auto& tab = std::get<Tabulated>(family_);
  const double x = t / tab.dt;
  if (x > static_cast<double>(tab.values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= tab.values.size()) return tab.values.back();
  const double f = x - static_cast<double>(i);
  return tab.values[i] * (1.0 - f) + tab.values[i + 1] * f;
}

double Kernel::tail_integral(double t) const {
  if (t <= 0.0) return l1_;
  if (const auto* e = std::get_if<Exponential>(&family_))
    return (e->weight / e->rate) * std::exp(-e->rate * t);
  if (const auto* k = std::get_if<ErlangK>(&family_))
    return k->weight * boost::math::gamma_q(static_cast<double>(k->shape),
                                            k->rate * t);
  if (const auto* u = std::get_if<UniformSupport>(&family_))
    return t >= u->length ? 0.0 : u->height * (u->length - t);
  const auto& tab = std::get<Tabulated>(family_);
  const double x = t / tab.dt;
  if (x >= static_cast<double>(tab.values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(x);
  const double s = t - static_cast<double>(i) * tab.dt;
  const double v0 = tab.values[i];
  const double slope = (tab.values[i + 1] - v0) / tab.dt;
  const double partial = v0 * s + 0.5 * slope * s * s;
  return l1_ - (cum_[i] + partial);
}

double Kernel::truncation_length(double eps) const {
  const double target = eps * l1_;
  if (l1_ == 0.0) return 0.0;
  if (const auto* e = std::get_if<Exponential>(&family_))
    return -std::log(eps) / e->rate;
  if (const auto* k = std::get_if<ErlangK>(&family_))
    return boost::math::gamma_q_inv(static_cast<double>(k->shape), eps) /
           k->rate;
  if (const auto* u = std::get_if<UniformSupport>(&family_)) return u->length;
  const auto& tab = std::get<Tabulated>(family_);
  for (std::size_t i = 0; i < tab.values.size(); ++i)
    if (l1_ - cum_[i] <= target) return static_cast<double>(i) * tab.dt;
  return static_cast<double>(tab.values.size() - 1) * tab.dt;
}

std::optional<double> Kernel::envelope(double t) const {
  if (std::holds_alternative<Tabulated>(family_)) return std::nullopt;
  if (t < 0.0) t = 0.0;
  if (const auto* k = std::get_if<ErlangK>(&family_)) {
    // Erlang densities rise to the mode; flatten the head to keep the
    // envelope non-increasing.
    const double m = erlang_mode(*k);
    return value(std::max(t, 0.0) < m ? m : t);
  }
  return value(t);
}

bool Kernel::has_envelope() const {
  return !std::holds_alternative<Tabulated>(family_);
}

double Kernel::sample_truncated(double u, double horizon) const {
  const double mass = cdf_mass(horizon);
  if (mass <= 0.0) return 0.0;
  const double target = u * mass;
  if (const auto* e = std::get_if<Exponential>(&family_)) {
    // weight/rate (1 - e^{-rate t}) = target
    const double a = target * e->rate / e->weight;
    return -std::log1p(-a) / e->rate;
  }
  if (const auto* k = std::get_if<ErlangK>(&family_)) {
    const double p = target / k->weight;
    return boost::math::gamma_p_inv(static_cast<double>(k->shape), p) /
           k->rate;
  }
  if (const auto* un = std::get_if<UniformSupport>(&family_))
    return u * std::min(horizon, un->length);
  const auto& tab = std::get<Tabulated>(family_);
  // binary search the cumulative trapezoid, then invert within the cell
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  if (it == cum_.begin()) return 0.0;
  const auto i = static_cast<std::size_t>(it - cum_.begin()) - 1;
  if (i + 1 >= cum_.size()) return static_cast<double>(i) * tab.dt;
  const double rem = target - cum_[i];
  const double v0 = tab.values[i];
  const double slope = (tab.values[i + 1] - v0) / tab.dt;
  // solve v0 s + slope s^2/2 = rem for s in [0, dt]
  double s;
  if (std::abs(slope) < 1e-300) {
    s = v0 > 0.0 ? rem / v0 : 0.0;
  } else {
    const double disc = v0 * v0 + 2.0 * slope * rem;
    s = (-v0 + std::sqrt(std::max(0.0, disc))) / slope;
  }
  s = std::clamp(s, 0.0, tab.dt);
  return static_cast<double>(i) * tab.dt + s;
}

GridFunction Kernel::tabulate(double dt, double eps) const {
  const double len = truncation_length(eps);
  const auto n = static_cast<std::size_t>(std::ceil(len / dt)) + 1;
  GridFunction g;
  g.dt = dt;
  g.values.resize(std::max<std::size_t>(n, 2));
  for (std::size_t i = 0; i < g.values.size(); ++i)
    g.values[i] = value(static_cast<double>(i) * dt);
  return g;
}

Baseline::Baseline(Kind kind) : kind_(std::move(kind)) {
  if (const auto* p = std::get_if<PiecewiseBaseline>(&kind_)) {
    if (p->breakpoints.empty() || p->levels.empty() ||
        p->breakpoints.size() != p->levels.size())
      throw validation_error(
          "PiecewiseBaseline: need equal-length breakpoints/levels with a "
          "final level");
    if (p->breakpoints.front() != 0.0)
      throw validation_error("PiecewiseBaseline: first breakpoint must be 0");
    for (std::size_t i = 1; i < p->breakpoints.size(); ++i)
      if (p->breakpoints[i] <= p->breakpoints[i - 1])
        throw validation_error("PiecewiseBaseline: breakpoints must increase");
    for (double l : p->levels)
      if (l < 0.0) throw validation_error("PiecewiseBaseline: negative level");
  } else {
    if (std::get<ConstantBaseline>(kind_).rate < 0.0)
      throw validation_error("ConstantBaseline: negative rate");
  }
}

bool Baseline::is_constant() const {
  return std::holds_alternative<ConstantBaseline>(kind_);
}

double Baseline::value(double t) const {
  if (const auto* c = std::get_if<ConstantBaseline>(&kind_)) return c->rate;
  const auto& p = std::get<PiecewiseBaseline>(kind_);
  auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), t);
  const auto i = static_cast<std::size_t>(it - p.breakpoints.begin());
  return p.levels[i == 0 ? 0 : i - 1];
}

double Baseline::integral(double t) const {
  if (t <= 0.0) return 0.0;
  if (const auto* c = std::get_if<ConstantBaseline>(&kind_)) return c->rate * t;
  const auto& p = std::get<PiecewiseBaseline>(kind_);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    const double lo = p.breakpoints[i];
    if (lo >= t) break;
    const double hi = (i + 1 < p.breakpoints.size())
                          ? std::min(p.breakpoints[i + 1], t)
                          : t;
    acc += p.levels[i] * (hi - lo);
  }
  return acc;
}

double Baseline::max_level() const {
  if (const auto* c = std::get_if<ConstantBaseline>(&kind_)) return c->rate;
  const auto& p = std::get<PiecewiseBaseline>(kind_);
  return *std::max_element(p.levels.begin(), p.levels.end());
}

double Baseline::mean_rate() const {
  if (const auto* c = std::get_if<ConstantBaseline>(&kind_)) return c->rate;
  return std::get<PiecewiseBaseline>(kind_).levels.back();
}

}  // namespace hawkes
