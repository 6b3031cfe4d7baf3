#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

// Input/model validation problems: bad parameters, unstable kernel sequences,
// malformed scenario files. CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Stability violations (rho >= 1, spectral radius >= 1, net-profit /
// Lundberg inequality failures).
class stability_error : public validation_error {
 public:
  explicit stability_error(const std::string& what) : validation_error(what) {}
};

// Scenario / configuration parse and schema problems.
class config_error : public validation_error {
 public:
  explicit config_error(const std::string& what) : validation_error(what) {}
};

// Numerical failures at run time: truncation caps exceeded, solvers without
// a root in the admissible range, grid budgets blown. CLI maps these to
// exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hawkes
