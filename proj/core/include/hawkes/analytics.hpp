#pragma once

#include <vector>

#include "hawkes/sequence.hpp"

namespace hawkes {

// First- and second-order growth constants of the stationary count, with
// certified truncation errors for both series.
struct LimitConstants {
  std::vector<double> m_n;  // per-generation rates, index 0 = immigrants
  double m = 0.0;           // sum of m_n (truncated)
  double sigma2 = 0.0;      // variance constant of the normalized count
  double truncation_error_m = 0.0;
  double truncation_error_sigma2 = 0.0;
};

LimitConstants limit_constants(const KernelSequence& seq, double tol);

// Expected count on [0, t] by grid evaluation of the convolution series.
double mean_count(const KernelSequence& seq, double t, double dt);

// Assignment of generation indices to classes 1..d. Generations past the
// explicit list follow the sequence extension: cyclic repeats the list,
// tail-constant (and null) stick with the last class.
struct PartitionSpec {
  int d = 1;
  std::vector<int> classes;
};

// Class label (1..d) of generation n under the extension rule above.
int partition_class(const PartitionSpec& part, Extension ext, std::size_t n);

std::vector<double> partition_lln(const KernelSequence& seq,
                                  const PartitionSpec& part, double tol);

// Long-run class rates of the d-variate count: solves (I - Phi) x = nu after
// a power-iteration check that the spectral radius of Phi stays below one.
std::vector<double> multivariate_check(
    const std::vector<double>& nu,
    const std::vector<std::vector<double>>& phi);

struct EquilibriumBound {
  double value = 0.0;       // mass in (0,T] descending from pre-(-s) immigrants
  double strong_cap = 0.0;  // s-independent cap: rate * eta / (1-rho)^2
  bool cap_resolved = true; // first moments fully resolved (tabulated tails)
};

// Requires a constant baseline; value decreases in s and sits below the cap.
EquilibriumBound equilibrium_bound(const KernelSequence& seq, double s,
                                   double T, double dt);

}  // namespace hawkes
