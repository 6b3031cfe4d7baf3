#include "hawkes/analytics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "hawkes/errors.hpp"
#include "hawkes/grid.hpp"

namespace hawkes {

namespace {

constexpr std::size_t kGridCap = std::size_t{1} << 23;

GridFunction clip(GridFunction f, std::size_t n_pts) {
  if (f.values.size() > n_pts) f.values.resize(n_pts);
  return f;
}

// trapezoid integral of f over [a, b] with linear interpolation at the
// fractional end cells
double integrate(const GridFunction& f, double a, double b) {
  a = std::max(a, 0.0);
  b = std::min(b, f.length());
  if (b <= a) return 0.0;
  const double dt = f.dt;
  auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(a / dt - 1e-9)));
  auto i1 = static_cast<std::size_t>(std::max(0.0, std::floor(b / dt + 1e-9)));
  i1 = std::min(i1, f.values.size() - 1);
  if (i0 > i1 || static_cast<double>(i1) * dt < a)
    return 0.5 * (f(a) + f(b)) * (b - a);
  double total = 0.0;
  for (std::size_t i = i0; i + 1 <= i1; ++i)
    total += 0.5 * (f.values[i] + f.values[i + 1]) * dt;
  const double t0 = static_cast<double>(i0) * dt;
  if (t0 > a) total += 0.5 * (f(a) + f.values[i0]) * (t0 - a);
  const double t1 = static_cast<double>(i1) * dt;
  if (t1 < b) total += 0.5 * (f.values[i1] + f(b)) * (b - t1);
  return total;
}

struct GenerationRates {
  std::vector<double> m_n;
  double remainder = 0.0;  // certified bound on the dropped tail
};

GenerationRates generation_rates(const KernelSequence& seq, double tol) {
  const double g0 = seq.baseline().mean_rate();
  const double rho = seq.rho();
  GenerationRates out;
  out.m_n.push_back(g0);
  if (g0 == 0.0 || rho == 0.0) return out;
  double term = g0;
  for (std::size_t n = 1; n < 1000000; ++n) {
    term *= seq.norm_at(n);
    if (term == 0.0) return out;  // null extension exhausted
    out.m_n.push_back(term);
    const double tail = term * rho / (1.0 - rho);
    if (tail < tol) {
      out.remainder = tail;
      return out;
    }
  }
  throw numerical_error("generation_rates: series did not certify under tol");
}

// B_j = sum_{p>=1} prod_{i=j+1}^{j+p} ||gamma_i||, exact per-cycle collapse
// for cyclic extensions, running-product truncation otherwise.
class InnerSums {
 public:
  InnerSums(const KernelSequence& seq, double tol) : seq_(seq), tol_(tol) {
    if (seq.extension() == Extension::kCyclic) {
      const auto& ks = seq.explicit_kernels();
      const std::size_t K = ks.size();
      bool positive = true;
      double log_c = 0.0;
      double c = 1.0;
      for (const auto& k : ks) {
        const double v = k.l1_norm();
        c *= v;
        if (v > 0.0)
          log_c += std::log(v);
        else
          positive = false;
      }
      cycle_prod_ = positive ? std::exp(log_c) : c;
      qsum_.resize(K, 0.0);
      for (std::size_t r = 0; r < K; ++r) {
        double prod = 1.0;
        for (std::size_t p = 0; p < K; ++p) {
          prod *= ks[(r + p) % K].l1_norm();
          qsum_[r] += prod;
        }
      }
    }
  }

  double at(std::size_t j) const {
    if (!qsum_.empty()) return qsum_[j % qsum_.size()] / (1.0 - cycle_prod_);
    const double rho = seq_.rho();
    double prod = 1.0;
    double sum = 0.0;
    for (std::size_t p = 1; p < 1000000; ++p) {
      prod *= seq_.norm_at(j + p);
      if (prod == 0.0) return sum;
      sum += prod;
      if (prod < tol_ * (1.0 - rho)) return sum;
    }
    throw numerical_error("limit_constants: inner series did not certify");
  }

 private:
  const KernelSequence& seq_;
  double tol_;
  std::vector<double> qsum_;
  double cycle_prod_ = 0.0;
};

}  // namespace

LimitConstants limit_constants(const KernelSequence& seq, double tol) {
  if (!(tol > 0.0)) throw validation_error("limit_constants: tol must be > 0");
  const double rho = seq.rho();
  const double slack = (1.0 - rho) * (1.0 - rho);
  const GenerationRates rates = generation_rates(seq, tol * slack);
  LimitConstants out;
  out.m_n = rates.m_n;
  for (double v : out.m_n) out.m += v;
  out.truncation_error_m = rates.remainder;
  out.truncation_error_sigma2 = rates.remainder / slack;
  const InnerSums inner(seq, tol);
  for (std::size_t j = 0; j < out.m_n.size(); ++j) {
    const double b = 1.0 + inner.at(j);
    out.sigma2 += b * b * out.m_n[j];
  }
  return out;
}

double mean_count(const KernelSequence& seq, double t, double dt) {
  if (t < 0.0) throw validation_error("mean_count: t must be >= 0");
  if (!(dt > 0.0)) throw validation_error("mean_count: dt must be > 0");
  if (t == 0.0) return 0.0;
  const auto n = static_cast<std::size_t>(std::ceil(t / dt));
  if (n + 1 > kGridCap) {
    std::ostringstream msg;
    msg << "mean_count: grid of " << (n + 1) << " points exceeds the memory cap "
        << kGridCap << "; increase dt";
    throw config_error(msg.str());
  }
  GridFunction layer{dt, std::vector<double>(n + 1)};
  for (std::size_t i = 0; i <= n; ++i)
    layer.values[i] = seq.baseline().value(static_cast<double>(i) * dt);
  GridFunction acc = layer;
  const double rho = seq.rho();
  for (std::size_t gen = 1; rho > 0.0 && gen < 100000; ++gen) {
    const Kernel* k = seq.kernel_at(gen);
    if (k == nullptr) break;
    layer = clip(convolve(layer, clip(k->tabulate(dt), n + 1)), n + 1);
    for (std::size_t i = 0; i <= n; ++i) acc.values[i] += layer.values[i];
    const double mass = integrate(layer, 0.0, t);
    if (mass * rho / (1.0 - rho) <
        1e-12 * std::max(1.0, integrate(acc, 0.0, t)))
      break;
  }
  return integrate(acc, 0.0, t);
}

int partition_class(const PartitionSpec& part, Extension ext, std::size_t n) {
  const std::size_t len = part.classes.size();
  if (n < len) return part.classes[n];
  if (ext == Extension::kCyclic) return part.classes[n % len];
  return part.classes[len - 1];
}

std::vector<double> partition_lln(const KernelSequence& seq,
                                  const PartitionSpec& part, double tol) {
  if (part.d < 1) throw validation_error("partition_lln: d must be >= 1");
  if (part.classes.empty())
    throw validation_error("partition_lln: class list must be nonempty");
  for (int c : part.classes)
    if (c < 1 || c > part.d)
      throw validation_error("partition_lln: class labels must lie in 1..d");
  const GenerationRates rates = generation_rates(seq, tol);
  std::vector<double> out(static_cast<std::size_t>(part.d), 0.0);
  for (std::size_t n = 0; n < rates.m_n.size(); ++n) {
    const int cls = partition_class(part, seq.extension(), n);
    out[static_cast<std::size_t>(cls - 1)] += rates.m_n[n];
  }
  return out;
}

std::vector<double> multivariate_check(
    const std::vector<double>& nu,
    const std::vector<std::vector<double>>& phi) {
  const std::size_t d = nu.size();
  if (d == 0) throw validation_error("multivariate_check: empty rate vector");
  if (phi.size() != d)
    throw validation_error("multivariate_check: matrix/vector size mismatch");
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (phi[i].size() != d)
      throw validation_error("multivariate_check: matrix must be square");
    for (std::size_t j = 0; j < d; ++j) {
      if (phi[i][j] < 0.0)
        throw validation_error(
            "multivariate_check: matrix entries must be nonnegative");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          phi[i][j];
    }
    if (nu[i] < 0.0)
      throw validation_error(
          "multivariate_check: rate entries must be nonnegative");
  }

  // Gelfand estimate of the spectral radius by normalized power iteration
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));
  double log_growth = 0.0;
  double radius = 0.0;
  const int iters = 1000;
  for (int k = 1; k <= iters; ++k) {
    x = m * x;
    const double norm = x.lpNorm<Eigen::Infinity>();
    if (norm == 0.0) {
      radius = 0.0;
      break;
    }
    log_growth += std::log(norm);
    x /= norm;
    radius = std::exp(log_growth / k);
  }
  if (radius >= 1.0 - 1e-9) {
    std::ostringstream msg;
    msg << "multivariate_check: spectral radius estimate " << radius
        << " is not below 1";
    throw stability_error(msg.str());
  }

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    rhs(static_cast<Eigen::Index>(i)) = nu[i];
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                static_cast<Eigen::Index>(d)) -
      m;
  const Eigen::VectorXd sol = lhs.colPivHouseholderQr().solve(rhs);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i)
    out[i] = sol(static_cast<Eigen::Index>(i));
  return out;
}

EquilibriumBound equilibrium_bound(const KernelSequence& seq, double s,
                                   double T, double dt) {
  if (s < 0.0) throw validation_error("equilibrium_bound: s must be >= 0");
  if (!(T > 0.0)) throw validation_error("equilibrium_bound: T must be > 0");
  if (!(dt > 0.0)) throw validation_error("equilibrium_bound: dt must be > 0");
  if (!seq.baseline().is_constant())
    throw validation_error(
        "equilibrium_bound: requires a constant baseline rate");

  const double g0 = seq.baseline().mean_rate();
  const double rho = seq.rho();
  EquilibriumBound out;
  out.strong_cap = g0 * seq.eta() / ((1.0 - rho) * (1.0 - rho));
  out.cap_resolved = seq.eta_resolved();
  const auto& kernels = seq.explicit_kernels();
  if (kernels.empty() || rho == 0.0 || g0 == 0.0) return out;

  const double span = s + T;
  const auto n = static_cast<std::size_t>(std::ceil(span / dt));
  if (n + 1 > kGridCap) {
    std::ostringstream msg;
    msg << "equilibrium_bound: grid of " << (n + 1)
        << " points exceeds the memory cap " << kGridCap << "; increase dt";
    throw config_error(msg.str());
  }

  // Sum of tail-of-chain functions for terms whose deepest absorbed kernel
  // index is start-1: H_start + gamma_{start+1} * H_start + ...
  auto chain_sum = [&](std::size_t start) {
    const std::size_t first = seq.explicit_index_at(start);
    GridFunction g{dt, std::vector<double>(n + 1)};
    for (std::size_t i = 0; i <= n; ++i)
      g.values[i] =
          kernels[first].tail_integral(static_cast<double>(i) * dt);
    GridFunction sum = g;
    double mass = integrate(g, 0.0, span);
    const double scale = std::max(mass, 1e-30);
    for (std::size_t idx = start + 1; idx < start + 100000; ++idx) {
      const Kernel* k = seq.kernel_at(idx);
      if (k == nullptr) break;
      mass *= k->l1_norm();
      if (mass / (1.0 - rho) < 1e-13 * scale) break;
      g = clip(convolve(clip(k->tabulate(dt), n + 1), g), n + 1);
      for (std::size_t i = 0; i <= n; ++i) sum.values[i] += g.values[i];
    }
    return sum;
  };

  const std::size_t K = kernels.size();
  std::vector<double> prefix(K, 1.0);  // prefix[j] = prod_{i<=j} ||gamma_i||
  for (std::size_t j = 1; j < K; ++j)
    prefix[j] = prefix[j - 1] * kernels[j - 1].l1_norm();

  double value = 0.0;
  switch (seq.extension()) {
    case Extension::kNull:
      for (std::size_t j = 0; j < K; ++j)
        value += prefix[j] * integrate(chain_sum(j + 1), s, span);
      break;
    case Extension::kCyclic: {
      double c = 1.0;
      for (const auto& k : kernels) c *= k.l1_norm();
      for (std::size_t r = 0; r < K; ++r)
        value += prefix[r] / (1.0 - c) * integrate(chain_sum(r + 1), s, span);
      break;
    }
    case Extension::kTailConstant: {
      for (std::size_t j = 0; j + 1 < K; ++j)
        value += prefix[j] * integrate(chain_sum(j + 1), s, span);
      const double last = kernels[K - 1].l1_norm();
      value += prefix[K - 1] / (1.0 - last) * integrate(chain_sum(K), s, span);
      break;
    }
  }
  out.value = g0 * value;
  return out;
}

}  // namespace hawkes
