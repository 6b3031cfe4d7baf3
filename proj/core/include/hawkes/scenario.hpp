#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/analytics.hpp"
#include "hawkes/claims.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/sequence.hpp"

namespace hawkes {

// A fully described experiment: the kernel family, horizons, seeds,
// tolerances, and the optional risk / partition blocks. The JSON schema is
// documented in docs/scenario.md; load -> save -> load is lossless.
struct Scenario {
  std::string name;
  Baseline baseline{Baseline::Kind{ConstantBaseline{1.0}}};
  std::vector<Kernel> kernels;
  Extension extension = Extension::kTailConstant;

  double horizon = 100.0;
  int replications = 1;
  std::uint64_t seed = 0;

  // tolerance block
  double series_tol = 1e-12;
  double grid_dt = 1e-3;
  double divergence_cap = 50.0;

  // optional claim-law block
  std::optional<ClaimLaw> claim_law;
  double premium = 0.0;
  double reserve = 0.0;

  std::optional<PartitionSpec> partition;

  std::string output_dir;  // empty: resolved by the caller / environment

  // Builds the kernel sequence, re-running the subcriticality checks with
  // the offending kernel named in the message.
  KernelSequence sequence() const;
};

// Canonical serialized form (keys sorted, stable float round-trip).
std::string scenario_to_json(const Scenario& s);
// origin appears in parse diagnostics (file name or "<string>").
Scenario scenario_from_json(const std::string& text, const std::string& origin);

// Load with full validation; optional warnings (e.g. a claims block whose
// premium violates the net profit condition -- simulation stays legal, the
// analytic ruin solvers will refuse).
Scenario load_scenario(const std::string& path,
                       std::vector<std::string>* warnings = nullptr);
void save_scenario(const Scenario& s, const std::string& path);

// temp file + rename in the target directory
void write_file_atomic(const std::string& path, const std::string& content);

// One named result with the error that accompanies it.
struct ReportScalar {
  std::string name;
  double value = 0.0;
  double error = 0.0;
  std::string error_kind;  // "exact" | "truncation" | "mc_se" | "bound"
};

// Run record: scenario echo, scalars with error companions, file manifest,
// wall clock and RNG provenance.
struct Report {
  std::string subcommand;
  Scenario scenario;
  std::vector<ReportScalar> scalars;
  std::vector<std::string> files;
  double wall_seconds = 0.0;

  void add(const std::string& name, double value, double error,
           const std::string& kind);
  std::string to_json() const;
  void write(const std::string& path) const;  // atomic
};

}  // namespace hawkes
