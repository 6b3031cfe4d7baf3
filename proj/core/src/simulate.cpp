#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hawkes/errors.hpp"

namespace hawkes {

std::vector<std::size_t> EventLog::generation_counts() const {
  std::vector<std::size_t> counts;
  for (const auto& e : events) {
    if (counts.size() <= static_cast<std::size_t>(e.generation))
      counts.resize(static_cast<std::size_t>(e.generation) + 1, 0);
    ++counts[static_cast<std::size_t>(e.generation)];
  }
  return counts;
}

void EventLog::validate() const {
  double prev = 0.0;
  int max_seen = -1;
  for (const auto& e : events) {
    if (e.time <= prev)
      throw numerical_error("EventLog: times not strictly increasing");
    if (e.time > horizon) throw numerical_error("EventLog: event past horizon");
    if (e.generation < 0) throw numerical_error("EventLog: negative generation");
    prev = e.time;
    max_seen = std::max(max_seen, e.generation);
  }
  // ancestry: a generation-g event needs an earlier generation-(g-1) event
  std::vector<double> first_time(static_cast<std::size_t>(max_seen) + 2,
                                 horizon + 1.0);
  for (const auto& e : events) {
    const auto g = static_cast<std::size_t>(e.generation);
    if (g > 0 && e.time <= first_time[g - 1])
      throw numerical_error("EventLog: orphan event (no earlier parent "
                            "generation)");
    first_time[g] = std::min(first_time[g], e.time);
  }
}

void EventLog::write_csv(std::ostream& os) const {
  os << "time,generation\n";
  os << std::fixed << std::setprecision(9);
  for (const auto& e : events) os << e.time << ',' << e.generation << '\n';
}

namespace {

// Smallest M with mean_rate*T*rho^{M+1}/(1-rho) < tol.
int plan_depth(const KernelSequence& seq, double T, double tol) {
  const double rho = seq.rho();
  if (rho == 0.0) return 0;
  const double scale = seq.baseline().mean_rate() * T / (1.0 - rho);
  if (scale <= 0.0) return 0;
  int M = 0;
  double tail = scale * rho;  // bound at M = 0
  while (tail >= tol) {
    ++M;
    tail *= rho;
    if (M > kMaxGenerationCap) {
      std::ostringstream msg;
      msg << "simulate_branching: tolerance " << tol
          << " needs more than " << kMaxGenerationCap
          << " generations; achievable bound at the cap is "
          << scale * std::pow(rho, kMaxGenerationCap + 1);
      throw numerical_error(msg.str());
    }
  }
  return M;
}

double truncation_bound(const KernelSequence& seq, double T, int M) {
  const double rho = seq.rho();
  if (rho == 0.0) return 0.0;
  return seq.baseline().mean_rate() * T * std::pow(rho, M + 1) / (1.0 - rho);
}

std::vector<double> sample_immigrants(const Baseline& base, double T,
                                      PhiloxEngine& eng) {
  std::vector<double> times;
  const double cap = base.max_level();
  if (cap <= 0.0) return times;
  double t = 0.0;
  const bool constant = base.is_constant();
  while (true) {
    t += eng.exponential(cap);
    if (t > T) break;
    if (constant || eng.uniform() * cap < base.value(t))
      times.push_back(t);
  }
  return times;
}

}  // namespace

EventLog simulate_branching(const KernelSequence& seq, double T,
                            const RngStream& rng, double tol) {
  if (T <= 0.0) throw validation_error("simulate_branching: T must be > 0");
  if (tol <= 0.0) throw validation_error("simulate_branching: tol must be > 0");
  const int M = plan_depth(seq, T, tol);

  PhiloxEngine eng = rng.engine();
  EventLog log;
  log.horizon = T;
  log.truncation_generation = M;
  log.truncation_bound = truncation_bound(seq, T, M);

  std::vector<double> parents = sample_immigrants(seq.baseline(), T, eng);
  for (double t : parents) log.events.push_back({t, 0});

  for (int n = 1; n <= M && !parents.empty(); ++n) {
    const Kernel* k = seq.kernel_at(static_cast<std::size_t>(n));
    if (k == nullptr) break;
    std::vector<double> children;
    for (double tau : parents) {
      const double mass = k->cdf_mass(T - tau);
      const int c = eng.poisson(mass);
      for (int j = 0; j < c; ++j) {
        const double t = tau + k->sample_truncated(eng.uniform(), T - tau);
        children.push_back(t);
        log.events.push_back({t, n});
      }
    }
    std::sort(children.begin(), children.end());
    parents = std::move(children);
  }

  std::sort(log.events.begin(), log.events.end(),
            [](const Event& a, const Event& b) {
              return a.time < b.time ||
                     (a.time == b.time && a.generation < b.generation);
            });
  return log;
}

EventLog simulate_thinning(const KernelSequence& seq, double T,
                           const RngStream& rng, int max_gen) {
  if (T <= 0.0) throw validation_error("simulate_thinning: T must be > 0");
  if (!seq.all_have_envelopes())
    throw validation_error(
        "simulate_thinning: tabulated kernels expose no non-increasing "
        "envelope; use simulate_branching");

  PhiloxEngine eng = rng.engine();
  EventLog log;
  log.horizon = T;
  log.truncation_generation = max_gen;
  log.truncation_bound = truncation_bound(seq, T, max_gen);

  struct Source {
    double time;
    int child_gen;         // generation its children would get
    const Kernel* kernel;  // gamma_{child_gen}
    double expiry;         // time + truncation length
  };
  std::deque<Source> active;
  const double base_cap = seq.baseline().max_level();
  const double refresh = 1.0;  // envelope refresh stride between candidates

  // per-kernel truncation horizon for dropping dead sources
  std::vector<double> trunc_len(seq.explicit_kernels().size());
  for (std::size_t i = 0; i < trunc_len.size(); ++i)
    trunc_len[i] = seq.explicit_kernels()[i].truncation_length(1e-12);

  std::vector<double> weights;
  double t = 0.0;
  while (t < T) {
    while (!active.empty() && active.front().expiry <= t) active.pop_front();

    double envelope = base_cap;
    for (const auto& s : active)
      envelope += *s.kernel->envelope(t - s.time);
    if (envelope <= 0.0) break;

    const double gap = eng.exponential(envelope);
    if (gap > refresh && !active.empty()) {
      // envelopes only fall over time: re-tighten instead of accepting the
      // stale bound across a long gap
      t += refresh;
      continue;
    }
    t += gap;
    if (t > T) break;

    double intensity = seq.baseline().value(t);
    weights.clear();
    weights.push_back(intensity);
    for (const auto& s : active) {
      const double w = s.kernel->value(t - s.time);
      intensity += w;
      weights.push_back(intensity);
    }
    if (eng.uniform() * envelope >= intensity) continue;

    // accepted: attribute a generation proportionally to the contributions
    const double pick = eng.uniform() * intensity;
    int gen = 0;
    if (pick >= weights[0]) {
      const auto it = std::upper_bound(weights.begin(), weights.end(), pick);
      const auto idx = static_cast<std::size_t>(it - weights.begin());
      gen = active[idx - 1].child_gen;
    }
    log.events.push_back({t, gen});
    if (gen < max_gen) {
      const auto n = static_cast<std::size_t>(gen) + 1;
      const std::size_t idx = seq.explicit_index_at(n);
      if (idx != KernelSequence::npos) {
        active.push_back({t, static_cast<int>(n), &seq.explicit_kernels()[idx],
                          t + trunc_len[idx]});
      }
    }
  }
  return log;
}

std::vector<ReplicateSummary> replicate(const KernelSequence& seq, double T,
                                        double tol, std::uint64_t seed,
                                        int n_reps) {
  if (n_reps < 1) throw validation_error("replicate: n_reps must be >= 1");
  std::vector<ReplicateSummary> out;
  out.reserve(static_cast<std::size_t>(n_reps));
  for (int r = 0; r < n_reps; ++r) {
    const RngStream stream{seed, static_cast<std::uint64_t>(r)};
    EventLog log = simulate_branching(seq, T, stream, tol);
    ReplicateSummary s;
    s.stream = stream.stream;
    s.total = log.count();
    s.per_generation = log.generation_counts();
    s.truncation_bound = log.truncation_bound;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hawkes
