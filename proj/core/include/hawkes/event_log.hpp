#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace hawkes {

struct Event {
  double time = 0.0;
  int generation = 0;
};

// One realization on (0, T]. Events are sorted by time; every event of
// generation g >= 1 has an earlier generation-(g-1) event (its parent pool).
struct EventLog {
  double horizon = 0.0;
  std::vector<Event> events;
  int truncation_generation = 0;  // M_used
  double truncation_bound = 0.0;  // mean_rate*T*rho^{M_used+1}/(1-rho)

  std::size_t count() const { return events.size(); }
  std::vector<std::size_t> generation_counts() const;

  // Checks sortedness (strict), range (0, T], and the ancestry property;
  // throws on violation.
  void validate() const;

  // CSV with header "time,generation", 9-decimal times.
  void write_csv(std::ostream& os) const;
};

}  // namespace hawkes
