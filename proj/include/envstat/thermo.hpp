#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "envstat/counting.hpp"
#include "envstat/qstate.hpp"
#include "envstat/rational.hpp"

namespace envstat {

// kB ln(count), evaluated in log space from the big integer. count must be
// at least 1.
double boltzmann_entropy(const BigInt& count, double k_b = 1.0);

// ln(joint) - ln(system) - ln(bath): zero for uncorrelated counting, and the
// correlation correction otherwise.
double entropy_additivity_check(const BigInt& system_count, const BigInt& bath_count,
                                const BigInt& joint_count);

// 1/T = kB * d ln(count)/dE via a central difference on the reachable energy
// lattice (step: gcd of the level spacings); one-sided at the range ends.
// Raises domain_error when the energy has no reachable neighbor.
double bath_inverse_temperature(const BathSpec& bath, const Rational& bath_energy,
                                double k_b = 1.0);

// exp((F_S - e_k) / (kB T)); T must be nonzero.
double canonical_weight(const Rational& level_energy, double free_energy, double temperature,
                        double k_b = 1.0);

// canonical_weight suppressed by exp(-D) where D is the system-bath mutual
// information (non-negative).
double generalized_canonical_weight(const Rational& level_energy, double free_energy,
                                    double temperature, double k_b, double mutual_info);

struct MutualInfoReport {
  double d = 0.0;                // quantum mutual information, nats
  double log_count_ratio = 0.0;  // signed ln(joint / (system * bath)); <= 0 when correlated
  double discrepancy = 0.0;      // |d - |log_count_ratio||
};

// Compares the mutual information of the state against the count-ratio
// expression. Only valid when both marginals are maximally mixed on their
// supports (the entropy of such a marginal is the log of its support
// dimension); anything else raises domain_error.
MutualInfoReport mutual_info_identity_check(const PureState& state, const BigInt& system_count,
                                            const BigInt& bath_count, const BigInt& joint_count,
                                            double tol = 1e-9);

struct ThermoReport {
  double k_b = 1.0;
  double inverse_temperature = 0.0;
  double temperature = 0.0;
  double bath_entropy = 0.0;
  std::optional<double> system_entropy;
  std::optional<double> free_energy;
  std::vector<std::pair<Rational, double>> weights;  // per system level
};

// Assembles the bath-side quantities at bath_energy and, when a system
// spectrum is supplied, the free energy F_S = E_S - T H_S at system_level
// (default: its lowest level) plus the canonical weight of every system
// level.
ThermoReport thermo_report(const BathSpec& bath, const Rational& bath_energy, double k_b = 1.0,
                           const std::optional<Spectrum>& system = std::nullopt,
                           const std::optional<Rational>& system_level = std::nullopt);

}  // namespace envstat
