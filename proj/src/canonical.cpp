#include "envstat/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

struct Ensemble {
  std::vector<double> energies;
  std::vector<double> log_degeneracies;
};

// Normalized level weights w_j(lambda) and the mean/variance of the energy
// under them, evaluated with the max exponent subtracted.
struct WeightStats {
  std::vector<double> weights;
  double partition_log = 0.0;  // ln sum_j g_j e^{lambda e_j}
  double mean = 0.0;
  double variance = 0.0;
};

WeightStats weight_stats(const Ensemble& ens, double lambda) {
  const std::size_t m = ens.energies.size();
  std::vector<double> q(m);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    q[j] = ens.log_degeneracies[j] + lambda * ens.energies[j];
    peak = std::max(peak, q[j]);
  }
  WeightStats stats;
  stats.weights.resize(m);
  double z = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    stats.weights[j] = std::exp(q[j] - peak);
    z += stats.weights[j];
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    stats.weights[j] /= z;
    mean += ens.energies[j] * stats.weights[j];
  }
  double var = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = ens.energies[j] - mean;
    var += d * d * stats.weights[j];
  }
  stats.partition_log = peak + std::log(z);
  stats.mean = mean;
  stats.variance = var;
  return stats;
}

void check_feasible(const Spectrum& spectrum, std::int64_t n_units, const Rational& bath_energy) {
  const Rational lo = Rational(n_units) * spectrum.min_energy();
  const Rational hi = Rational(n_units) * spectrum.max_energy();
  if (bath_energy == lo)
    throw boundary_error("degenerate boundary: every unit pinned to the lowest level", 0);
  if (bath_energy == hi)
    throw boundary_error("degenerate boundary: every unit pinned to the highest level",
                         static_cast<std::size_t>(spectrum.num_levels() - 1));
  if (bath_energy < lo || bath_energy > hi)
    throw infeasible_error("bath energy " + format_rational(bath_energy) +
                           " outside the feasible interval (" + format_rational(lo) + ", " +
                           format_rational(hi) + ")");
}

}  // namespace

CanonicalSolution solve_boltzmann_gibbs(const Spectrum& spectrum, std::int64_t n_units,
                                        const Rational& bath_energy) {
  if (n_units < 1) throw validation_error("bath needs at least one unit");
  check_feasible(spectrum, n_units, bath_energy);

  Ensemble ens;
  for (const Level& level : spectrum.levels()) {
    ens.energies.push_back(to_double(level.energy));
    ens.log_degeneracies.push_back(std::log(static_cast<double>(level.degeneracy)));
  }
  const double target = to_double(bath_energy / n_units);

  // Bracket the root of the increasing mean-energy curve.
  double lo = 0.0, hi = 0.0, step = 1.0;
  while (weight_stats(ens, lo).mean > target) {
    lo -= step;
    step *= 2.0;
  }
  step = 1.0;
  while (weight_stats(ens, hi).mean < target) {
    hi += step;
    step *= 2.0;
  }

  double lambda = 0.5 * (lo + hi);
  WeightStats stats = weight_stats(ens, lambda);
  const double tol = 1e-12 * std::max(1.0, std::abs(target));
  for (int iter = 0; iter < 200 && std::abs(stats.mean - target) > tol; ++iter) {
    if (stats.mean < target)
      lo = lambda;
    else
      hi = lambda;
    double next = lambda - (stats.mean - target) / stats.variance;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda) break;
    lambda = next;
    stats = weight_stats(ens, lambda);
  }

  CanonicalSolution sol;
  sol.lambda = lambda;
  sol.mu = static_cast<double>(n_units) * std::exp(-stats.partition_log);
  sol.occupations.resize(ens.energies.size());
  double total = 0.0, total_energy = 0.0;
  for (std::size_t j = 0; j < ens.energies.size(); ++j) {
    sol.occupations[j] = static_cast<double>(n_units) * stats.weights[j];
    total += sol.occupations[j];
    total_energy += sol.occupations[j] * ens.energies[j];
  }
  const double e_bath = to_double(bath_energy);
  sol.count_residual = std::abs(total - static_cast<double>(n_units)) / n_units;
  sol.mean_energy_residual = std::abs(total_energy - e_bath) / std::max(1.0, std::abs(e_bath));
  return sol;
}

ArgmaxResult argmax_occupation(const BathSpec& bath, const Rational& bath_energy,
                               std::size_t enumeration_guard) {
  const std::vector<OccupationVector> feasible =
      enumerate_occupations(bath, bath_energy, enumeration_guard);
  if (feasible.empty())
    throw infeasible_error("no occupation reaches bath energy " + format_rational(bath_energy));

  ArgmaxResult best{feasible.front(), occupation_count(bath, feasible.front()), false};
  for (std::size_t i = 1; i < feasible.size(); ++i) {
    BigInt count = occupation_count(bath, feasible[i]);
    if (count > best.count) {
      best = ArgmaxResult{feasible[i], std::move(count), false};
    } else if (count == best.count) {
      best.tied = true;
      // Enumeration is descending, so a later tie is the smaller vector.
      best.occupation = feasible[i];
    }
  }
  return best;
}

ZerothLawReport zeroth_law_check(const Spectrum& spectrum, std::int64_t n_units,
                                 const Rational& bath_energy, const Rational& offset1,
                                 const Rational& offset2) {
  ZerothLawReport report;
  report.lambda1 = solve_boltzmann_gibbs(spectrum, n_units, bath_energy - offset1).lambda;
  report.lambda2 = solve_boltzmann_gibbs(spectrum, n_units, bath_energy - offset2).lambda;
  report.difference = std::abs(report.lambda1 - report.lambda2);
  return report;
}

}  // namespace envstat
