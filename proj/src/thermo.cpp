#include "envstat/thermo.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

namespace mp = boost::multiprecision;

void require_positive_kb(double k_b) {
  if (!(k_b > 0.0)) throw validation_error("kB must be positive");
}

bool maximally_mixed_on_support(const Eigen::MatrixXcd& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> support;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > 1e-12) support.push_back(es.eigenvalues()[i]);
  const double uniform = 1.0 / static_cast<double>(support.size());
  for (double p : support)
    if (std::abs(p - uniform) > tol) return false;
  return true;
}

}  // namespace

double boltzmann_entropy(const BigInt& count, double k_b) {
  require_positive_kb(k_b);
  if (count < 1) throw domain_error("entropy of an empty shell is undefined");
  return k_b * log_big(count);
}

double entropy_additivity_check(const BigInt& system_count, const BigInt& bath_count,
                                const BigInt& joint_count) {
  return log_big(joint_count) - log_big(system_count) - log_big(bath_count);
}

double bath_inverse_temperature(const BathSpec& bath, const Rational& bath_energy, double k_b) {
  require_positive_kb(k_b);
  const DegeneracyTable table = degeneracy_table(bath);

  // Step of the reachable-energy lattice: gcd of the level spacings.
  BigInt gcd = 0;
  for (const Level& level : bath.unit().levels()) {
    const Rational offset = (level.energy - bath.unit().min_energy()) / table.step;
    gcd = mp::gcd(gcd, mp::numerator(offset));
  }
  if (gcd == 0)
    throw domain_error("single-level bath has an isolated reachable energy");
  const Rational h = table.step * Rational(gcd);
  const double h_d = to_double(h);

  const BigInt center = table.at(bath_energy);
  const BigInt above = table.at(bath_energy + h);
  const BigInt below = table.at(bath_energy - h);

  if (above >= 1 && below >= 1) return k_b * (log_big(above) - log_big(below)) / (2.0 * h_d);
  if (above >= 1 && center >= 1) return k_b * (log_big(above) - log_big(center)) / h_d;
  if (below >= 1 && center >= 1) return k_b * (log_big(center) - log_big(below)) / h_d;
  throw domain_error("bath energy " + format_rational(bath_energy) +
                     " has no reachable neighbor on the energy lattice");
}

double canonical_weight(const Rational& level_energy, double free_energy, double temperature,
                        double k_b) {
  require_positive_kb(k_b);
  if (temperature == 0.0) throw domain_error("canonical weight undefined at T = 0");
  return std::exp((free_energy - to_double(level_energy)) / (k_b * temperature));
}

double generalized_canonical_weight(const Rational& level_energy, double free_energy,
                                    double temperature, double k_b, double mutual_info) {
  if (mutual_info < 0.0) throw validation_error("mutual information must be non-negative");
  return canonical_weight(level_energy, free_energy, temperature, k_b) * std::exp(-mutual_info);
}

MutualInfoReport mutual_info_identity_check(const PureState& state, const BigInt& system_count,
                                            const BigInt& bath_count, const BigInt& joint_count,
                                            double tol) {
  const Eigen::MatrixXcd rho_s =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);
  const Eigen::MatrixXcd rho_b =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::Environment);
  if (!maximally_mixed_on_support(rho_s, tol) || !maximally_mixed_on_support(rho_b, tol))
    throw domain_error("count-ratio identity requires marginals maximally mixed on their supports");

  MutualInfoReport report;
  report.d = mutual_information(state);
  // Correlated supports shrink the joint count below the product, so the
  // signed ratio is non-positive and its magnitude is the mutual information.
  report.log_count_ratio = entropy_additivity_check(system_count, bath_count, joint_count);
  report.discrepancy = std::abs(report.d - std::abs(report.log_count_ratio));
  return report;
}

ThermoReport thermo_report(const BathSpec& bath, const Rational& bath_energy, double k_b,
                           const std::optional<Spectrum>& system,
                           const std::optional<Rational>& system_level) {
  require_positive_kb(k_b);
  const DegeneracyTable table = degeneracy_table(bath);
  const BigInt count = table.at(bath_energy);
  if (count < 1)
    throw domain_error("bath energy " + format_rational(bath_energy) + " is unreachable");

  ThermoReport report;
  report.k_b = k_b;
  report.bath_entropy = boltzmann_entropy(count, k_b);
  report.inverse_temperature = bath_inverse_temperature(bath, bath_energy, k_b);
  report.temperature = 1.0 / report.inverse_temperature;

  if (system) {
    const Rational level = system_level.value_or(system->min_energy());
    std::int64_t shell = 0;
    for (const Level& l : system->levels())
      if (l.energy == level) shell = l.degeneracy;
    if (shell == 0)
      throw domain_error("system level " + format_rational(level) + " not in the spectrum");
    const double h_s = boltzmann_entropy(BigInt(shell), k_b);
    report.system_entropy = h_s;
    report.free_energy =
        to_double(level) - (h_s == 0.0 ? 0.0 : report.temperature * h_s);
    for (const Level& l : system->levels())
      report.weights.emplace_back(
          l.energy, canonical_weight(l.energy, *report.free_energy, report.temperature, k_b));
  }
  return report;
}

}  // namespace envstat
