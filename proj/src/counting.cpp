#include "envstat/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "envstat/errors.hpp"
#include "envstat/kernels.hpp"

namespace envstat {

namespace {

namespace mp = boost::multiprecision;

constexpr std::int64_t kMaxGridCells = 50'000'000;

// Unit levels rescaled to non-negative integers: offset_j = (e_j - e_min) * denom.
struct LevelGrid {
  Rational anchor;  // n_units * e_min
  BigInt denom;
  std::vector<std::int64_t> offsets;
  std::int64_t max_offset = 0;
};

std::int64_t to_int64_checked(const BigInt& v, const char* what) {
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max())
    throw domain_error(std::string(what) + " does not fit a 64-bit integer");
  return v.convert_to<std::int64_t>();
}

LevelGrid level_grid(const BathSpec& bath) {
  LevelGrid grid;
  grid.denom = 1;
  for (const Level& level : bath.unit().levels())
    grid.denom = mp::lcm(grid.denom, mp::denominator(level.energy));
  const Rational e_min = bath.unit().min_energy();
  grid.anchor = Rational(bath.n_units()) * e_min;
  for (const Level& level : bath.unit().levels()) {
    const Rational shifted = (level.energy - e_min) * grid.denom;
    grid.offsets.push_back(to_int64_checked(mp::numerator(shifted), "rescaled level energy"));
  }
  grid.max_offset = grid.offsets.back();
  if (grid.max_offset > 0 && bath.n_units() > kMaxGridCells / grid.max_offset)
    throw domain_error("rescaled energy grid is too large");
  return grid;
}

// Shifted-integer index of an energy on the grid, or nullopt off the lattice.
std::optional<std::int64_t> grid_index(const LevelGrid& grid, std::int64_t n_units,
                                       const Rational& energy) {
  const Rational shifted = (energy - grid.anchor) * grid.denom;
  if (mp::denominator(shifted) != 1) return std::nullopt;
  const BigInt t = mp::numerator(shifted);
  if (t < 0 || t > BigInt(n_units) * grid.max_offset) return std::nullopt;
  return t.convert_to<std::int64_t>();
}

DegeneracyTable table_from_counts(const LevelGrid& grid, std::vector<BigInt> counts) {
  return DegeneracyTable{grid.anchor, Rational(BigInt(1), grid.denom), std::move(counts)};
}

BigInt binomial_big(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace

Spectrum::Spectrum(std::vector<Level> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw validation_error("spectrum needs at least one level");
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (levels_[j].degeneracy < 1) throw validation_error("level degeneracies must be positive");
    if (j > 0 && !(levels_[j - 1].energy < levels_[j].energy))
      throw validation_error("level energies must be strictly increasing");
  }
}

std::int64_t Spectrum::total_states() const {
  std::int64_t s = 0;
  for (const Level& level : levels_) s += level.degeneracy;
  return s;
}

BathSpec::BathSpec(Spectrum unit, std::int64_t n_units) : unit_(std::move(unit)), n_(n_units) {
  if (n_ < 1) throw validation_error("bath needs at least one unit");
}

std::int64_t OccupationVector::total() const {
  std::int64_t s = 0;
  for (std::int64_t n : counts) s += n;
  return s;
}

BigInt DegeneracyTable::at(const Rational& energy) const {
  const Rational shifted = (energy - anchor) / step;
  if (mp::denominator(shifted) != 1) return 0;
  const BigInt t = mp::numerator(shifted);
  if (t < 0 || t >= BigInt(counts.size())) return 0;
  return counts[t.convert_to<std::size_t>()];
}

std::vector<std::pair<Rational, BigInt>> DegeneracyTable::reachable() const {
  std::vector<std::pair<Rational, BigInt>> out;
  for (std::size_t t = 0; t < counts.size(); ++t)
    if (counts[t] != 0) out.emplace_back(anchor + Rational(t) * step, counts[t]);
  return out;
}

std::vector<OccupationVector> enumerate_occupations(const BathSpec& bath,
                                                    const Rational& bath_energy,
                                                    std::size_t guard) {
  const LevelGrid grid = level_grid(bath);
  const int m = bath.unit().num_levels();
  std::vector<OccupationVector> result;

  const std::optional<std::int64_t> target = grid_index(grid, bath.n_units(), bath_energy);
  if (!target) return result;

  std::vector<std::int64_t> counts(m, 0);
  // Descending choice per level gives descending lexicographic output.
  std::function<void(int, std::int64_t, std::int64_t)> walk = [&](int j, std::int64_t units,
                                                                  std::int64_t energy) {
    if (j == m - 1) {
      if (units * grid.offsets[j] == energy) {
        counts[j] = units;
        result.push_back(OccupationVector{counts});
        if (result.size() > guard) throw domain_error("occupation enumeration guard exceeded");
      }
      return;
    }
    const std::int64_t off = grid.offsets[j];
    std::int64_t hi = units;
    if (off > 0) hi = std::min(hi, energy / off);
    for (std::int64_t n = hi; n >= 0; --n) {
      const std::int64_t rest_units = units - n;
      const std::int64_t rest_energy = energy - n * off;
      if (rest_energy < grid.offsets[j + 1] * rest_units) continue;
      if (rest_energy > grid.max_offset * rest_units) continue;
      counts[j] = n;
      walk(j + 1, rest_units, rest_energy);
    }
    counts[j] = 0;
  };
  walk(0, bath.n_units(), *target);
  return result;
}

BigInt multinomial(const OccupationVector& occ) {
  BigInt r = 1;
  std::int64_t placed = 0;
  for (std::int64_t n : occ.counts) {
    if (n < 0) throw validation_error("occupation counts must be non-negative");
    placed += n;
    r *= binomial_big(placed, n);
  }
  return r;
}

BigInt occupation_count(const BathSpec& bath, const OccupationVector& occ) {
  if (static_cast<int>(occ.counts.size()) != bath.unit().num_levels())
    throw validation_error("occupation length does not match the spectrum");
  if (occ.total() != bath.n_units())
    throw validation_error("occupation does not place every bath unit");
  BigInt r = multinomial(occ);
  for (int j = 0; j < bath.unit().num_levels(); ++j)
    r *= mp::pow(BigInt(bath.unit().levels()[j].degeneracy),
                 static_cast<unsigned>(occ.counts[j]));
  return r;
}

DegeneracyTable degeneracy_table(const BathSpec& bath) {
  const LevelGrid grid = level_grid(bath);
  const std::int64_t cells = bath.n_units() * grid.max_offset + 1;
  std::vector<BigInt> cur(cells, BigInt(0)), next(cells, BigInt(0));
  cur[0] = 1;
  for (std::int64_t u = 1; u <= bath.n_units(); ++u) {
    const std::int64_t reach = u * grid.max_offset;
    std::fill(next.begin(), next.begin() + reach + 1, BigInt(0));
    for (std::int64_t t = 0; t <= reach; ++t) {
      BigInt sum = 0;
      for (int j = 0; j < bath.unit().num_levels(); ++j) {
        const std::int64_t prev = t - grid.offsets[j];
        if (prev < 0 || prev > (u - 1) * grid.max_offset) continue;
        if (cur[prev] != 0) sum += cur[prev] * bath.unit().levels()[j].degeneracy;
      }
      next[t] = std::move(sum);
    }
    cur.swap(next);
  }
  return table_from_counts(grid, std::move(cur));
}

BigInt bath_degeneracy(const BathSpec& bath, const Rational& bath_energy) {
  return degeneracy_table(bath).at(bath_energy);
}

DegeneracyTable brute_force_table(const BathSpec& bath, double guard) {
  const LevelGrid grid = level_grid(bath);
  const double states = static_cast<double>(bath.unit().total_states());
  const double total = std::pow(states, static_cast<double>(bath.n_units()));
  if (total > guard || total > 4e18)
    throw domain_error("brute-force enumeration guard exceeded: " + std::to_string(total) +
                       " assignments");

  std::vector<std::int64_t> state_energy;
  for (int j = 0; j < bath.unit().num_levels(); ++j)
    state_energy.insert(state_energy.end(), bath.unit().levels()[j].degeneracy, grid.offsets[j]);

  const std::vector<std::uint64_t> hist =
      kernels::energy_histogram(state_energy, static_cast<int>(bath.n_units()));
  std::vector<BigInt> counts(bath.n_units() * grid.max_offset + 1, BigInt(0));
  for (std::size_t t = 0; t < hist.size(); ++t) counts[t] = hist[t];
  return table_from_counts(grid, std::move(counts));
}

BigInt brute_force_count(const BathSpec& bath, const Rational& bath_energy, double guard) {
  return brute_force_table(bath, guard).at(bath_energy);
}

Rational accessibility_ratio(const std::map<Rational, BigInt>& system_shells, const BathSpec& bath,
                             const Rational& total_energy, const Rational& system_level) {
  const DegeneracyTable table = degeneracy_table(bath);
  BigInt denominator = 0;
  for (const auto& [energy, shell_size] : system_shells)
    denominator += shell_size * table.at(total_energy - energy);
  if (denominator == 0)
    throw domain_error("no composite state is compatible with the total energy");
  return Rational(table.at(total_energy - system_level), denominator);
}

double log_count_stirling(const OccupationVector& occ) {
  std::int64_t n = 0;
  for (std::int64_t c : occ.counts) {
    if (c < 0) throw validation_error("occupation counts must be non-negative");
    n += c;
  }
  if (n == 0) return 0.0;
  double s = static_cast<double>(n) * std::log(static_cast<double>(n));
  for (std::int64_t c : occ.counts)
    if (c > 0) s -= static_cast<double>(c) * std::log(static_cast<double>(c));
  return s;
}

}  // namespace envstat
