#pragma once

#include <cstdint>
#include <vector>

#include "envstat/counting.hpp"
#include "envstat/rational.hpp"

namespace envstat {

// Boltzmann-Gibbs occupation n_j = mu * g_j * e^{lambda e_j} maximizing the
// Stirling log-count under the unit-number and energy constraints. With all
// level degeneracies g_j = 1 this is the textbook n_j = mu e^{lambda e_j}.
struct CanonicalSolution {
  double mu = 0.0;
  double lambda = 0.0;
  std::vector<double> occupations;
  double mean_energy_residual = 0.0;  // relative
  double count_residual = 0.0;        // relative
};

// lambda is the unique root of the strictly monotone mean-energy equation
// sum_j e_j w_j(lambda) = E_B/N; found by bracketed bisection refined with
// Newton steps, converged to 1e-12 on the mean-energy residual.
// Requires N*e_min < E_B < N*e_max strictly; a boundary value raises
// boundary_error naming the saturated level, anything outside raises
// infeasible_error.
CanonicalSolution solve_boltzmann_gibbs(const Spectrum& spectrum, std::int64_t n_units,
                                        const Rational& bath_energy);

struct ArgmaxResult {
  OccupationVector occupation;
  BigInt count;      // exact microstate count of the maximizer
  bool tied = false; // a distinct occupation reaches the same count
};

// Occupation with the largest exact microstate count among all feasible
// occupations; ties resolved toward the lexicographically smallest vector.
ArgmaxResult argmax_occupation(const BathSpec& bath, const Rational& bath_energy,
                               std::size_t enumeration_guard = 2'000'000);

struct ZerothLawReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double difference = 0.0;
};

// Solves the same bath at energies E_B - e_k1 and E_B - e_k2 and reports the
// two multipliers; their difference shrinks as the bath grows.
ZerothLawReport zeroth_law_check(const Spectrum& spectrum, std::int64_t n_units,
                                 const Rational& bath_energy, const Rational& offset1,
                                 const Rational& offset2);

}  // namespace envstat
