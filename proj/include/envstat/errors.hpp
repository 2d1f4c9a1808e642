#pragma once

#include <stdexcept>
#include <string>

namespace envstat {

// Malformed or invariant-violating input (CLI exit code 2).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Well-formed input for which the requested quantity does not exist
// (empty shell, infeasible energy, ...). CLI exit code 1.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// construct_restoring called on a pair that fails the marginal criterion.
struct not_envariant_error : domain_error {
  explicit not_envariant_error(double mismatch)
      : domain_error("state is not envariant under the given unitary; "
                     "marginal mismatch " +
                     std::to_string(mismatch)),
        marginal_mismatch(mismatch) {}
  double marginal_mismatch;
};

// Energy constraint outside the feasible open interval.
struct infeasible_error : domain_error {
  using domain_error::domain_error;
};

// Energy constraint exactly at a boundary of the feasible interval.
struct boundary_error : domain_error {
  boundary_error(const std::string& msg, std::size_t level)
      : domain_error(msg), saturated_level(level) {}
  std::size_t saturated_level;
};

}  // namespace envstat
