#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "envstat/errors.hpp"
#include "envstat/qstate.hpp"
#include "test_support.hpp"

using namespace envstat;
using testsupport::bell_state;
using testsupport::random_state;

namespace {

Eigen::VectorXd descending_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd v = es.eigenvalues();
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  return v;
}

// Density matrix straight from the reshaped amplitude matrix, bypassing the
// library kernels.
Eigen::MatrixXcd oracle_reduced_system(const PureState& state) {
  using RowMat =
      Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(state.amplitudes().data(), state.dim_s(), state.dim_e());
  return m * m.adjoint();
}

}  // namespace

TEST_CASE("state construction validates its invariants") {
  Eigen::VectorXcd amps(4);
  amps << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(PureState(2, 2, amps), validation_error);
  CHECK_THROWS_AS(PureState(0, 2, Eigen::VectorXcd::Zero(0)), validation_error);
  CHECK_THROWS_AS(PureState(2, 2, Eigen::VectorXcd::Ones(3)), validation_error);
  const PureState ok = PureState::normalized(2, 2, amps);
  CHECK(ok.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("schmidt of the Bell state is even with rank 2") {
  const SchmidtDecomposition sd = schmidt(bell_state());
  REQUIRE(sd.rank == 2);
  CHECK(sd.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sd.coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("schmidt of a product state has rank 1") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps[0] = 1.0;
  const SchmidtDecomposition sd = schmidt(PureState(2, 2, std::move(amps)));
  REQUIRE(sd.rank == 1);
  CHECK(sd.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schmidt coefficients match the reduced-state eigenvalues") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const PureState state = random_state(3, 3, seed);
    const SchmidtDecomposition sd = schmidt(state);
    const Eigen::VectorXd eigs = descending_eigenvalues(oracle_reduced_system(state));
    for (int k = 0; k < sd.rank; ++k)
      CHECK(sd.coefficients[k] * sd.coefficients[k] == doctest::Approx(eigs[k]).epsilon(1e-10));
  }
}

TEST_CASE("schmidt round trip reproduces the state") {
  for (auto [ds, de] : {std::pair{2, 2}, {3, 5}, {5, 3}, {4, 7}, {8, 8}}) {
    const PureState state = random_state(ds, de, 100u * ds + de);
    const SchmidtDecomposition sd = schmidt(state);
    CHECK(std::abs(sd.coefficients.squaredNorm() - 1.0) <= 1e-10);
    CHECK(fidelity(reconstruct(sd, ds, de), state) >= 1.0 - 1e-10);
    CHECK((sd.basis_s.adjoint() * sd.basis_s -
           Eigen::MatrixXcd::Identity(sd.rank, sd.rank)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((sd.basis_e.adjoint() * sd.basis_e -
           Eigen::MatrixXcd::Identity(sd.rank, sd.rank)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("partial trace of known states") {
  const Eigen::MatrixXcd rho = partial_trace(bell_state(), Side::System).entries();
  CHECK((rho - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::VectorXcd prod = Eigen::VectorXcd::Zero(4);
  prod[0] = 1.0;
  const Eigen::MatrixXcd rho0 = partial_trace(PureState(2, 2, prod), Side::System).entries();
  CHECK(rho0(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(rho0(1, 1)) <= 1e-14);

  const PureState even = testsupport::even_state(4, 4, 4, 5);
  const Eigen::MatrixXcd rho4 = partial_trace(even, Side::System).entries();
  CHECK((rho4 - 0.25 * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("spectrum consistency between schmidt and partial trace") {
  for (auto [ds, de] : {std::pair{2, 6}, {4, 3}, {5, 5}}) {
    const PureState state = random_state(ds, de, 31u * ds + de);
    const SchmidtDecomposition sd = schmidt(state);
    const Eigen::VectorXd eigs =
        descending_eigenvalues(partial_trace(state, Side::System).entries());
    for (int k = 0; k < sd.rank; ++k)
      CHECK(std::abs(sd.coefficients[k] * sd.coefficients[k] - eigs[k]) <= 1e-10);
    for (int k = sd.rank; k < eigs.size(); ++k) CHECK(std::abs(eigs[k]) <= 1e-10);
  }
}

TEST_CASE("local swap flips the Bell state branches") {
  const PureState swapped = apply_local(bell_state(), testsupport::swap2(), Side::System);
  Eigen::VectorXcd expected(4);
  expected << 0.0, 1.0, 1.0, 0.0;
  const PureState target = PureState::normalized(2, 2, std::move(expected));
  CHECK(fidelity(swapped, target) >= 1.0 - 1e-12);
}

TEST_CASE("apply_local round trips through the inverse") {
  const PureState state = random_state(4, 5, 7);
  const UnitaryOp u = random_haar_unitary(4, 21);
  const PureState forward = apply_local(state, u, Side::System);
  const PureState back = apply_local(forward, UnitaryOp(u.entries().adjoint()), Side::System);
  CHECK(fidelity(back, state) >= 1.0 - 1e-12);
  CHECK(fidelity(apply_local(state, UnitaryOp(Eigen::MatrixXcd::Identity(4, 4)), Side::System),
                 state) >= 1.0 - 1e-12);
  CHECK_THROWS_AS(apply_local(state, u, Side::Environment), validation_error);
}

TEST_CASE("environment-side unitaries leave the system marginal fixed") {
  const PureState state = random_state(3, 4, 99);
  const UnitaryOp u = random_haar_unitary(4, 100);
  const Eigen::MatrixXcd before = partial_trace(state, Side::System).entries();
  const Eigen::MatrixXcd after =
      partial_trace(apply_local(state, u, Side::Environment), Side::System).entries();
  CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("von Neumann entropy of known matrices") {
  CHECK(von_neumann_entropy(DensityMatrix(0.5 * Eigen::MatrixXcd::Identity(2, 2))) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, 3);
  proj(1, 1) = 1.0;
  CHECK(von_neumann_entropy(DensityMatrix(proj)) == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(2, 2);
  mixed(0, 0) = 0.7;
  mixed(1, 1) = 0.3;
  const double expected = -(0.7 * std::log(0.7) + 0.3 * std::log(0.3));
  CHECK(von_neumann_entropy(DensityMatrix(mixed)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.6109).epsilon(1e-4));
}

TEST_CASE("entropy stays within its bounds") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PureState state = random_state(4, 6, 1000 + seed);
    const double s = von_neumann_entropy(partial_trace(state, Side::System));
    CHECK(s >= 0.0);
    CHECK(s <= std::log(4.0));
  }
}

TEST_CASE("mutual information of reference states") {
  Eigen::VectorXcd prod = Eigen::VectorXcd::Zero(4);
  prod[0] = 1.0;
  CHECK(mutual_information(PureState(2, 2, prod)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mutual_information(bell_state()) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  const PureState even = testsupport::even_state(4, 5, 3, 8);
  CHECK(mutual_information(even) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("haar sampling is unitary and seed-deterministic") {
  const UnitaryOp u1 = random_haar_unitary(1, 5);
  CHECK(std::abs(std::abs(u1.entries()(0, 0)) - 1.0) <= 1e-12);

  const UnitaryOp a = random_haar_unitary(4, 42);
  const UnitaryOp b = random_haar_unitary(4, 42);
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXcd gram = a.entries().adjoint() * a.entries();
  CHECK((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("density and unitary constructors reject bad input") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, std::complex<double>(0, 0.5), std::complex<double>(0, 0.5), 0.0;
  CHECK_THROWS_AS(DensityMatrix{bad}, validation_error);
  CHECK_THROWS_AS(DensityMatrix(2.0 * Eigen::MatrixXcd::Identity(2, 2)), validation_error);
  CHECK_THROWS_AS(UnitaryOp(Eigen::MatrixXcd::Ones(2, 2)), validation_error);
  partial_trace(random_state(3, 3, 1), Side::Environment).validate();
}
