#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "envstat/canonical.hpp"
#include "envstat/errors.hpp"
#include "envstat/thermo.hpp"
#include "test_support.hpp"

using namespace envstat;

namespace {

BathSpec qubit_bath(std::int64_t n) {
  return BathSpec(Spectrum({{Rational(0), 1}, {Rational(1), 1}}), n);
}

BigInt random_big(std::mt19937_64& rng, int digits) {
  BigInt v = 1 + static_cast<std::uint64_t>(rng() % 9);
  while (v < boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits)))
    v = v * 10 + static_cast<std::uint64_t>(rng() % 10);
  return v;
}

// Bell pair shared between the first qubit of each side, uniform local
// factors on the second: marginals are I/2 (x) |+><+|, so both supports have
// dimension 2 and carry even weights.
PureState bell_correlated_state() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(16);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j2 = 0; j2 < 2; ++j2)
        amps[(2 * i1 + i2) * 4 + (2 * i1 + j2)] = 0.5 / std::sqrt(2.0);
  return PureState(4, 4, std::move(amps));
}

}  // namespace

TEST_CASE("Boltzmann entropy is the log of the count") {
  CHECK(boltzmann_entropy(BigInt(1)) == 0.0);
  CHECK(boltzmann_entropy(BigInt(6)) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
  CHECK(boltzmann_entropy(BigInt(6), 2.0) == doctest::Approx(2.0 * std::log(6.0)).epsilon(1e-12));

  const BigInt big = multinomial({{500, 500}});  // C(1000, 500)
  CHECK(boltzmann_entropy(big) ==
        doctest::Approx(testsupport::log_binomial(1000, 500)).epsilon(1e-12));
  CHECK(boltzmann_entropy(big) == doctest::Approx(689.4672).epsilon(1e-6));

  CHECK_THROWS_AS(boltzmann_entropy(BigInt(0)), domain_error);
  CHECK_THROWS_AS(boltzmann_entropy(BigInt(5), -1.0), validation_error);
}

TEST_CASE("entropy additivity check") {
  CHECK(entropy_additivity_check(BigInt(12), BigInt(35), BigInt(12 * 35)) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // Bell-correlated toy: the joint support is a quarter of the product.
  const BigInt a(20), b(36);
  CHECK(entropy_additivity_check(a, b, a * b / 4) ==
        doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(entropy_additivity_check(a, b, a * b * 2) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy additivity is exact for huge uncorrelated counts") {
  std::mt19937_64 rng(99);
  for (int digits : {30, 300, 1000}) {
    const BigInt a = random_big(rng, digits);
    const BigInt b = random_big(rng, digits / 2);
    CHECK(std::abs(entropy_additivity_check(a, b, a * b)) <= 1e-12);
  }
}

TEST_CASE("bath inverse temperature from exact binomials") {
  const double inv_t = bath_inverse_temperature(qubit_bath(100), Rational(30));
  // Central difference of ln C(100, n): ln(C(100,31)/C(100,29))/2 = ln((70*71)/(31*30))/2.
  const double expected = std::log((70.0 * 71.0) / (31.0 * 30.0)) / 2.0;
  CHECK(inv_t == doctest::Approx(expected).epsilon(1e-12));
  CHECK(inv_t ==
        doctest::Approx((testsupport::log_binomial(100, 31) - testsupport::log_binomial(100, 29)) /
                        2.0)
            .epsilon(1e-10));

  // Locally maximal count at half filling: C(100,49) = C(100,51) exactly.
  CHECK(bath_inverse_temperature(qubit_bath(100), Rational(50)) == 0.0);

  // Just above the ground energy the count ratio is steep.
  CHECK(bath_inverse_temperature(qubit_bath(100), Rational(1)) > 3.0);

  CHECK_THROWS_AS(
      bath_inverse_temperature(BathSpec(Spectrum({{Rational(2), 3}}), 5), Rational(10)),
      domain_error);
}

TEST_CASE("inverse temperature uses the reachable lattice for gapped spectra") {
  // Levels {0, 2}: reachable energies step by 2, so neighbors sit at E +/- 2.
  const BathSpec gapped(Spectrum({{Rational(0), 1}, {Rational(2), 1}}), 20);
  const double inv_t = bath_inverse_temperature(gapped, Rational(12));
  const double expected =
      (testsupport::log_binomial(20, 7) - testsupport::log_binomial(20, 5)) / 4.0;
  CHECK(inv_t == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("one-sided differences at the range ends") {
  const double at_bottom = bath_inverse_temperature(qubit_bath(10), Rational(0));
  CHECK(at_bottom == doctest::Approx(std::log(10.0)).epsilon(1e-12));  // ln C(10,1) - ln C(10,0)
  const double at_top = bath_inverse_temperature(qubit_bath(10), Rational(10));
  CHECK(at_top == doctest::Approx(-std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("canonical weights obey the ratio identity") {
  CHECK(canonical_weight(Rational(3), 3.0, 1.7) == doctest::Approx(1.0).epsilon(1e-14));
  const double t = 0.83, f = -1.2, kb = 1.0;
  const double ratio = canonical_weight(Rational(2), f, t, kb) / canonical_weight(Rational(5), f, t, kb);
  CHECK(ratio == doctest::Approx(std::exp(3.0 / (kb * t))).epsilon(1e-12));
  CHECK_THROWS_AS(canonical_weight(Rational(1), 0.0, 0.0), domain_error);
}

TEST_CASE("canonical weight ratio matches the exact count ratio within O(1/N)") {
  const double inv_t = bath_inverse_temperature(qubit_bath(100), Rational(30));
  const double predicted = std::exp(-inv_t);
  const double exact = 30.0 / 71.0;  // C(100,29)/C(100,30)
  CHECK(std::abs(predicted - exact) / exact <= 0.03);
}

TEST_CASE("log count ratios across adjacent levels track -1/T within 5/N") {
  // Two-level bath: shifting the system level by one unit costs the bath one
  // unit, so ln N_B(E-1) - ln N_B(E) should approach -1/T away from the
  // spectrum edges.
  for (std::int64_t n : {std::int64_t{100}, std::int64_t{1000}}) {
    const BathSpec bath = qubit_bath(n);
    const DegeneracyTable table = degeneracy_table(bath);
    for (std::int64_t e = n / 8; e <= 7 * n / 8; e += std::max<std::int64_t>(1, n / 16)) {
      const double ratio =
          boltzmann_entropy(table.at(Rational(e - 1))) - boltzmann_entropy(table.at(Rational(e)));
      const double inv_t = bath_inverse_temperature(bath, Rational(e));
      CHECK(std::abs(ratio - (-inv_t)) <= 5.0 / static_cast<double>(n));
    }
  }
}

TEST_CASE("generalized weight reduces to the canonical weight at D = 0") {
  const double w = canonical_weight(Rational(2), 0.5, 1.3);
  CHECK(generalized_canonical_weight(Rational(2), 0.5, 1.3, 1.0, 0.0) == w);
  CHECK(generalized_canonical_weight(Rational(2), 0.5, 1.3, 1.0, 2.0 * std::log(2.0)) ==
        doctest::Approx(w / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(generalized_canonical_weight(Rational(2), 0.5, 1.3, 1.0, -0.1),
                  validation_error);
}

TEST_CASE("mutual information identity on a product even state") {
  Eigen::VectorXcd amps(4);
  amps << 0.5, 0.5, 0.5, 0.5;  // |+> (x) |+>
  const PureState product(2, 2, std::move(amps));
  const MutualInfoReport report =
      mutual_info_identity_check(product, BigInt(3), BigInt(5), BigInt(15));
  CHECK(report.d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.log_count_ratio == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.discrepancy <= 1e-9);
}

TEST_CASE("mutual information identity on the Bell-correlated state") {
  const PureState state = bell_correlated_state();
  const MutualInfoReport report =
      mutual_info_identity_check(state, BigInt(2), BigInt(2), BigInt(1));
  CHECK(report.d == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(report.log_count_ratio == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(report.discrepancy <= 1e-9);
}

TEST_CASE("the identity refuses non-maximally-mixed marginals") {
  const PureState uneven =
      testsupport::state_with_coefficients(2, 2, {std::sqrt(0.7), std::sqrt(0.3)}, 3);
  CHECK_THROWS_AS(mutual_info_identity_check(uneven, BigInt(2), BigInt(2), BigInt(1)),
                  domain_error);
}

TEST_CASE("thermo report assembles bath and system quantities") {
  const Spectrum system({{Rational(0), 1}, {Rational(1), 1}});
  const ThermoReport report = thermo_report(qubit_bath(100), Rational(30), 1.0, system);
  CHECK(report.inverse_temperature ==
        doctest::Approx(bath_inverse_temperature(qubit_bath(100), Rational(30))).epsilon(1e-14));
  CHECK(report.bath_entropy ==
        doctest::Approx(testsupport::log_binomial(100, 30)).epsilon(1e-10));
  REQUIRE(report.free_energy.has_value());
  CHECK(*report.free_energy == doctest::Approx(0.0).epsilon(1e-12));  // nondegenerate ground level
  REQUIRE(report.weights.size() == 2);
  CHECK(report.weights[0].second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.weights[1].second / report.weights[0].second ==
        doctest::Approx(std::exp(-report.inverse_temperature)).epsilon(1e-12));

  CHECK_THROWS_AS(thermo_report(qubit_bath(100), Rational(1, 2)), domain_error);
  CHECK_THROWS_AS(thermo_report(qubit_bath(100), Rational(30), 1.0, system, Rational(9)),
                  domain_error);

  // Consistency of the two canonical routes at growing bath size.
  const double lambda100 = solve_boltzmann_gibbs(qubit_bath(100).unit(), 100, Rational(30)).lambda;
  const double gap100 = std::abs(-lambda100 - report.inverse_temperature);
  const double lambda1000 =
      solve_boltzmann_gibbs(qubit_bath(1000).unit(), 1000, Rational(300)).lambda;
  const double inv1000 = bath_inverse_temperature(qubit_bath(1000), Rational(300));
  CHECK(std::abs(-lambda1000 - inv1000) < gap100);
}
