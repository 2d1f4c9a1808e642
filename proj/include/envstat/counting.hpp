#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "envstat/rational.hpp"

namespace envstat {

struct Level {
  Rational energy;
  std::int64_t degeneracy = 1;
};

// Single-unit eigenvalue spectrum: strictly increasing energies, positive
// degeneracies.
class Spectrum {
 public:
  explicit Spectrum(std::vector<Level> levels);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const std::vector<Level>& levels() const { return levels_; }
  const Rational& min_energy() const { return levels_.front().energy; }
  const Rational& max_energy() const { return levels_.back().energy; }
  std::int64_t total_states() const;  // sum of degeneracies

 private:
  std::vector<Level> levels_;
};

// Heat bath of n_units identical non-interacting units.
class BathSpec {
 public:
  BathSpec(Spectrum unit, std::int64_t n_units);

  const Spectrum& unit() const { return unit_; }
  std::int64_t n_units() const { return n_; }

 private:
  Spectrum unit_;
  std::int64_t n_;
};

// Per-level unit counts n_1..n_m.
struct OccupationVector {
  std::vector<std::int64_t> counts;
  std::int64_t total() const;
};

// Exact degeneracy count for every reachable bath energy at once. Energies
// live on the integer lattice anchor + t*step, where step is 1 over the
// common denominator of the unit levels.
struct DegeneracyTable {
  Rational anchor;  // n_units * e_min
  Rational step;
  std::vector<BigInt> counts;

  BigInt at(const Rational& energy) const;  // 0 off the lattice or out of range
  std::vector<std::pair<Rational, BigInt>> reachable() const;
};

// All occupation vectors with sum n_units and energy sum bath_energy, in
// descending lexicographic order (largest n_1 first). Empty when the energy
// is unreachable.
std::vector<OccupationVector> enumerate_occupations(const BathSpec& bath,
                                                    const Rational& bath_energy,
                                                    std::size_t guard = 2'000'000);

// N! / (n_1! n_2! ... n_m!), exact.
BigInt multinomial(const OccupationVector& occ);

// Microstates of one occupation: multinomial times prod_j degeneracy_j^{n_j}.
BigInt occupation_count(const BathSpec& bath, const OccupationVector& occ);

// Dynamic programming over units and reachable energies.
DegeneracyTable degeneracy_table(const BathSpec& bath);
BigInt bath_degeneracy(const BathSpec& bath, const Rational& bath_energy);

// Independent oracle: explicit enumeration of every unit-state assignment.
// Refuses when total_states^n_units exceeds the guard.
BigInt brute_force_count(const BathSpec& bath, const Rational& bath_energy, double guard = 1e7);
DegeneracyTable brute_force_table(const BathSpec& bath, double guard = 1e7);

// N_B(E_total - e_k) / N_S(E_total) with
// N_S(E_total) = sum_e shell(e) * N_B(E_total - e), exact.
Rational accessibility_ratio(const std::map<Rational, BigInt>& system_shells, const BathSpec& bath,
                             const Rational& total_energy, const Rational& system_level);

// Stirling log-count N ln N - sum n_j ln n_j (terms with n_j = 0 drop out).
double log_count_stirling(const OccupationVector& occ);

}  // namespace envstat
