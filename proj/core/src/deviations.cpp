#include "hawkes/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxIters = std::size_t{1} << 23;

// one application of the depth map for a single kernel norm
inline double step(double theta, double norm, double x) {
  return norm == 0.0 ? theta : theta + norm * std::expm1(x);
}

}  // namespace

CumulantModel::CumulantModel(KernelSequence seq, double tol,
                             double divergence_cap)
    : seq_(std::move(seq)),
      tol_(tol),
      cap_(divergence_cap),
      cache_(std::make_unique<Cache>()) {
  if (!(tol > 0.0)) throw validation_error("CumulantModel: tol must be > 0");
  if (!(divergence_cap > 0.0))
    throw validation_error("CumulantModel: divergence cap must be > 0");
}

// Iterate the recursion at cycle-aligned depths. The map composes the
// per-generation steps from the deepest kernel outward, so one outer pass
// advances the depth by a full cycle and the iterates are monotone in depth.
double CumulantModel::f_solve(double theta) const {
  if (theta == 0.0) return 0.0;
  const auto& kernels = seq_.explicit_kernels();
  if (kernels.empty()) return theta;  // no excitation
  const std::size_t K = kernels.size();
  std::vector<double> norms(K);
  for (std::size_t g = 0; g < K; ++g) norms[g] = kernels[g].l1_norm();

  if (seq_.extension() == Extension::kNull) {
    // finite composition: exact at depth K, constant beyond
    double x = theta;
    for (std::size_t g = K; g >= 1; --g) x = step(theta, norms[g - 1], x);
    return x;
  }

  // tail-constant: settle the innermost homogeneous fixpoint first, then
  // apply the explicit prefix maps once
  if (seq_.extension() == Extension::kTailConstant) {
    const double tail = norms[K - 1];
    double x = theta;
    double inc1 = 0.0, inc2 = 0.0;
    for (std::size_t it = 0; it < kMaxIters; ++it) {
      const double next = step(theta, tail, x);
      const double inc = next - x;
      if (!std::isfinite(next)) return kInf;
      if (next > cap_ && inc > inc1 && inc1 > inc2) return kInf;
      x = next;
      if (std::abs(inc) < tol_) {
        for (std::size_t g = K - 1; g >= 1; --g)
          x = step(theta, norms[g - 1], x);
        return x;
      }
      inc2 = inc1;
      inc1 = inc;
    }
    throw numerical_error("f_limit: recursion failed to settle");
  }

  // cyclic: one outer pass applies the whole cycle, deepest kernel first
  double x = theta;
  double inc1 = 0.0, inc2 = 0.0;
  for (std::size_t it = 0; it < kMaxIters; ++it) {
    double next = x;
    for (std::size_t g = K; g >= 1; --g) next = step(theta, norms[g - 1], next);
    const double inc = next - x;
    if (!std::isfinite(next)) return kInf;
    if (next > cap_ && inc > inc1 && inc1 > inc2) return kInf;
    x = next;
    if (std::abs(inc) < tol_) return x;
    inc2 = inc1;
    inc1 = inc;
  }
  throw numerical_error("f_limit: recursion failed to settle");
}

double CumulantModel::f_limit(double theta) const { return f_solve(theta); }

double CumulantModel::gamma(double theta) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->gamma.find(theta);
    if (it != cache_->gamma.end()) return it->second;
  }
  const double f = f_solve(theta);
  const double value =
      std::isfinite(f) ? seq_.baseline().mean_rate() * std::expm1(f) : kInf;
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->gamma.emplace(theta, value);
  return value;
}

double CumulantModel::gamma_prime(double theta) const {
  const double h = 1e-6 * std::max(1.0, std::abs(theta));
  const double lo = gamma(theta - h);
  const double hi = gamma(theta + h);
  if (!std::isfinite(lo) || !std::isfinite(hi)) return kInf;
  return (hi - lo) / (2.0 * h);
}

CriticalTheta CumulantModel::theta_c() const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->theta_c) return *cache_->theta_c;
  }
  CriticalTheta out;
  const double rho = seq_.rho();
  if (rho == 0.0 || seq_.extension() == Extension::kNull) {
    // bounded cascades: every exponential moment is finite
    out = {kThetaCap, true};
  } else {
    const double lower = rho - 1.0 - std::log(rho);  // guaranteed finite
    if (lower >= kThetaCap) {
      out = {kThetaCap, true};
    } else {
      double lo = lower;
      double hi = std::min(kThetaCap, 2.0 * lower);
      while (std::isfinite(f_solve(hi))) {
        lo = hi;
        if (hi >= kThetaCap) break;
        hi = std::min(kThetaCap, 2.0 * hi);
      }
      if (lo >= kThetaCap) {
        out = {kThetaCap, true};
      } else {
        while (hi - lo > std::max(tol_, 1e-10)) {
          const double mid = 0.5 * (lo + hi);
          (std::isfinite(f_solve(mid)) ? lo : hi) = mid;
        }
        out = {0.5 * (lo + hi), false};
      }
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->theta_c = out;
  return out;
}

double min_root(double theta, double rho) {
  if (!(rho > 0.0) || rho >= 1.0)
    throw validation_error("min_root: rho must lie in (0,1)");
  const double tangency = rho - 1.0 - std::log(rho);
  if (theta > tangency + 1e-14 * std::max(1.0, std::abs(tangency))) {
    std::ostringstream msg;
    msg << "min_root: no real solution, theta = " << theta
        << " exceeds the tangency value " << tangency;
    throw numerical_error(msg.str());
  }
  if (theta == 0.0) return 0.0;
  const auto g = [&](double x) { return theta + rho * std::expm1(x) - x; };
  double hi = std::log(1.0 / rho);  // g(hi) = theta - tangency <= 0
  double lo = std::min(theta, 0.0) - 1.0;
  for (int i = 0; i < 200 && g(lo) <= 0.0; ++i) lo = 2.0 * lo - 1.0;
  while (hi - lo > 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)})) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// sup over theta <= hi of theta*x - G(theta) for a convex G with G(0) = 0;
// golden-section after derivative-sign bracketing, with the supremum pinned
// at the right edge when the slope there still favors it
double legendre_sup(const std::function<double(double)>& G, double x,
                    double hi) {
  const auto phi = [&](double th) {
    const double g = G(th);
    return std::isfinite(g) ? th * x - g : -kInf;
  };
  const auto slope = [&](double th) {
    const double h = 1e-6 * std::max(1.0, std::abs(th));
    const double a = G(th - h);
    const double b = G(th + h);
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    return (b - a) / (2.0 * h);
  };

  const double edge_step = 1e-7 * std::max(1.0, std::abs(hi));
  const double edge_slope = slope(hi - edge_step);
  if (std::isfinite(edge_slope) && x >= edge_slope) {
    const double ghi = G(hi);
    if (std::isfinite(ghi)) return std::max(0.0, hi * x - ghi);
    double best = 0.0;  // theta = 0 always gives phi = 0
    for (int k = 2; k <= 12; ++k) {
      const double th = hi - std::pow(10.0, -k) * std::max(1.0, std::abs(hi));
      best = std::max(best, phi(th));
    }
    return best;
  }

  double lo = std::min(0.0, hi) - 1.0;
  for (int i = 0; i < 200 && x <= slope(lo); ++i) lo = 2.0 * lo - 1.0;

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > 1e-10) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = phi(d);
    }
  }
  return std::max(0.0, phi(0.5 * (a + b)));
}

}  // namespace

double rate_I(const CumulantModel& model, double x) {
  if (x < 0.0) return kInf;
  const double rate = model.sequence().baseline().mean_rate();
  if (x == 0.0) return rate;  // -inf_theta gamma(theta) = baseline rate
  const CriticalTheta tc = model.theta_c();
  return legendre_sup([&](double th) { return model.gamma(th); }, x, tc.value);
}

double gamma_C(const CumulantModel& model, const ClaimLaw& law, double theta) {
  const double lm = law.log_mgf(theta);
  if (!std::isfinite(lm)) return kInf;
  return model.gamma(lm);
}

CriticalTheta composed_theta_c(const CumulantModel& model,
                               const ClaimLaw& law) {
  const CriticalTheta tc = model.theta_c();
  if (tc.at_cap && law.mgf_sup() == kInf)
    return {CumulantModel::kThetaCap, true};
  const auto finite = [&](double th) {
    return std::isfinite(gamma_C(model, law, th));
  };
  double lo = 0.0;
  double hi = 1.0;
  while (finite(hi)) {
    lo = hi;
    if (hi >= CumulantModel::kThetaCap) return {CumulantModel::kThetaCap, true};
    hi = std::min(CumulantModel::kThetaCap, 2.0 * hi);
  }
  while (hi - lo > 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    (finite(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

double rate_IC(const CumulantModel& model, const ClaimLaw& law, double x) {
  if (x < 0.0) return kInf;
  const double rate = model.sequence().baseline().mean_rate();
  if (x == 0.0) return rate;  // claims are positive almost surely
  const CriticalTheta edge = composed_theta_c(model, law);
  return legendre_sup([&](double th) { return gamma_C(model, law, th); }, x,
                      edge.value);
}

double rate_J(const LimitConstants& constants, double x) {
  if (!(constants.sigma2 > 0.0))
    throw validation_error("rate_J: sigma2 must be > 0");
  return x * x / (2.0 * constants.sigma2);
}

EmpiricalCumulant empirical_cumulant(const KernelSequence& seq, double theta,
                                     double t, int n_reps, std::uint64_t seed) {
  if (!(t > 0.0)) throw validation_error("empirical_cumulant: t must be > 0");
  if (n_reps < 2)
    throw validation_error("empirical_cumulant: need at least two replicates");
  if (theta == 0.0) return {0.0, 0.0};

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n_reps));
  for (int r = 0; r < n_reps; ++r) {
    const EventLog log = simulate_branching(
        seq, t, RngStream{seed, static_cast<std::uint64_t>(r)}, 1e-9);
    xs.push_back(theta * static_cast<double>(log.count()));
  }

  const double hi = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double v : xs) sum += std::exp(v - hi);
  const auto n = static_cast<double>(xs.size());

  EmpiricalCumulant out;
  out.value = (hi + std::log(sum / n)) / t;
  std::vector<double> loo;
  loo.reserve(xs.size());
  for (double v : xs)
    loo.push_back((hi + std::log((sum - std::exp(v - hi)) / (n - 1.0))) / t);
  out.se = stats::jackknife_se(loo);
  return out;
}

}  // namespace hawkes
