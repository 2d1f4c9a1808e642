#include "envstat/microcanonical.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "envstat/envariance.hpp"
#include "envstat/errors.hpp"

namespace envstat {

namespace {

constexpr double kSupportCutoff = 1e-9;

Eigen::MatrixXcd hamiltonian_matrix(const Hamiltonian& h) { return h.to_matrix(); }

// Unitary acting as u_small inside the column span of basis and as identity
// outside it.
UnitaryOp embed_in_support(const Eigen::MatrixXcd& basis, const UnitaryOp& u_small) {
  const Eigen::Index dim = basis.rows();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim) - basis * basis.adjoint();
  u += basis * u_small.entries() * basis.adjoint();
  return UnitaryOp(std::move(u));
}

}  // namespace

Hamiltonian Hamiltonian::diagonal(std::vector<Rational> energies) {
  if (energies.empty()) throw validation_error("Hamiltonian needs at least one level");
  Hamiltonian h;
  h.dim_ = static_cast<int>(energies.size());
  h.diag_ = std::move(energies);
  return h;
}

Hamiltonian Hamiltonian::dense(Eigen::MatrixXcd matrix) {
  if (matrix.rows() < 1 || matrix.rows() != matrix.cols())
    throw validation_error("Hamiltonian matrix must be square and non-empty");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("Hamiltonian matrix is not Hermitian");
  Hamiltonian h;
  h.dim_ = static_cast<int>(matrix.rows());
  h.dense_ = std::move(matrix);
  return h;
}

Eigen::MatrixXcd Hamiltonian::to_matrix() const {
  if (!is_diagonal()) return dense_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) m(i, i) = to_double(diag_[i]);
  return m;
}

std::vector<Eigen::VectorXcd> degenerate_shell(const Hamiltonian& h, const Rational& energy,
                                               double tol) {
  std::vector<Eigen::VectorXcd> shell;
  if (h.is_diagonal()) {
    for (int i = 0; i < h.dim(); ++i) {
      if (h.diagonal_energies()[i] == energy) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(h.dim());
        v[i] = 1.0;
        shell.push_back(std::move(v));
      }
    }
    return shell;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense_matrix());
  const double target = to_double(energy);
  for (int i = 0; i < h.dim(); ++i) {
    if (std::abs(es.eigenvalues()[i] - target) <= tol)
      shell.push_back(es.eigenvectors().col(i));
  }
  return shell;
}

MicrocanonicalState build_microcanonical(const Hamiltonian& h, const Rational& energy, int dim_e,
                                         std::uint64_t phase_seed) {
  const std::vector<Eigen::VectorXcd> shell = degenerate_shell(h, energy);
  const int z = static_cast<int>(shell.size());
  if (z == 0) throw domain_error("empty shell: no level of the Hamiltonian matches the energy");
  if (dim_e < z)
    throw domain_error("environment dimension " + std::to_string(dim_e) +
                       " cannot support even entanglement of rank " + std::to_string(z));

  std::mt19937_64 rng(phase_seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXd phases(z);
  for (int k = 0; k < z; ++k) phases[k] = angle(rng);

  const double scale = 1.0 / std::sqrt(static_cast<double>(z));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.dim()) * dim_e);
  Eigen::MatrixXcd basis(h.dim(), z);
  for (int k = 0; k < z; ++k) {
    basis.col(k) = shell[k];
    const std::complex<double> coeff =
        scale * std::complex<double>(std::cos(phases[k]), std::sin(phases[k]));
    for (int i = 0; i < h.dim(); ++i)
      amps[static_cast<Eigen::Index>(i) * dim_e + k] += coeff * shell[k][i];
  }

  return MicrocanonicalState{PureState::normalized(h.dim(), dim_e, std::move(amps)), energy,
                             std::move(basis), std::move(phases), z};
}

double internal_energy(const PureState& state, const Hamiltonian& h_s) {
  if (h_s.dim() != state.dim_s())
    throw validation_error("Hamiltonian dimension does not match the system side");
  const Eigen::MatrixXcd rho =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);
  if (h_s.is_diagonal()) {
    double e = 0.0;
    for (int i = 0; i < h_s.dim(); ++i) e += rho(i, i).real() * to_double(h_s.diagonal_energies()[i]);
    return e;
  }
  return (rho * h_s.dense_matrix()).trace().real();
}

double energy_variance(const PureState& state, const Hamiltonian& h_s) {
  if (h_s.dim() != state.dim_s())
    throw validation_error("Hamiltonian dimension does not match the system side");
  const Eigen::MatrixXcd rho =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);
  const Eigen::MatrixXcd h = hamiltonian_matrix(h_s);
  const double mean = (rho * h).trace().real();
  const double second = (rho * h * h).trace().real();
  return second - mean * mean;
}

MicrocanonicalReport verify_microcanonical(const PureState& state, const Hamiltonian& h_s,
                                           double tol, int haar_checks, std::uint64_t seed) {
  if (h_s.dim() != state.dim_s())
    throw validation_error("Hamiltonian dimension does not match the system side");
  const Eigen::MatrixXcd rho =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  Eigen::Index first = 0;
  while (first < es.eigenvalues().size() && es.eigenvalues()[first] <= kSupportCutoff) ++first;
  const Eigen::Index r = es.eigenvalues().size() - first;
  const Eigen::MatrixXcd support = es.eigenvectors().rightCols(r);

  MicrocanonicalReport report;
  report.support_dim = static_cast<int>(r);
  report.haar_checks = haar_checks;

  const double uniform = 1.0 / static_cast<double>(r);
  report.marginal_deviation =
      (es.eigenvalues().tail(r).array() - uniform).abs().maxCoeff();

  for (int t = 0; t < haar_checks; ++t) {
    const UnitaryOp u = embed_in_support(
        support, random_haar_unitary(static_cast<int>(r), seed + static_cast<std::uint64_t>(t)));
    if (is_envariant(state, u, tol).envariant) ++report.haar_passes;
  }
  report.envariant_condition =
      report.marginal_deviation <= tol && report.haar_passes == haar_checks;

  const Eigen::MatrixXcd h = hamiltonian_matrix(h_s);
  double first_level = 0.0;
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::VectorXcd v = support.col(k);
    const Eigen::VectorXcd hv = h * v;
    const double level = v.dot(hv).real();
    if (k == 0) first_level = level;
    report.energy_spread = std::max(report.energy_spread, std::abs(level - first_level));
    report.max_eigen_residual =
        std::max(report.max_eigen_residual, (hv - level * v).cwiseAbs().maxCoeff());
  }
  report.degenerate_condition =
      report.max_eigen_residual <= tol && report.energy_spread <= tol;

  report.pass = report.envariant_condition && report.degenerate_condition;
  return report;
}

}  // namespace envstat
