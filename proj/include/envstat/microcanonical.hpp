#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "envstat/qstate.hpp"
#include "envstat/rational.hpp"

namespace envstat {

// System Hamiltonian, either a diagonal of exact-rational energies (so
// degeneracy is decided without floating-point ties) or a dense Hermitian
// matrix grouped into shells by tolerance.
class Hamiltonian {
 public:
  static Hamiltonian diagonal(std::vector<Rational> energies);
  static Hamiltonian dense(Eigen::MatrixXcd matrix);

  int dim() const { return dim_; }
  bool is_diagonal() const { return !diag_.empty(); }
  const std::vector<Rational>& diagonal_energies() const { return diag_; }
  const Eigen::MatrixXcd& dense_matrix() const { return dense_; }

  Eigen::MatrixXcd to_matrix() const;

 private:
  Hamiltonian() = default;
  int dim_ = 0;
  std::vector<Rational> diag_;
  Eigen::MatrixXcd dense_;
};

// Orthonormal basis of the eigenspace of h with eigenvalue energy (exact
// match for diagonal h, within tol for dense h). Empty when no level matches.
std::vector<Eigen::VectorXcd> degenerate_shell(const Hamiltonian& h, const Rational& energy,
                                               double tol = 1e-9);

struct MicrocanonicalState {
  PureState state;
  Rational shell_energy;
  Eigen::MatrixXcd shell_basis;  // dimS x Z, orthonormal columns
  Eigen::VectorXd phases;
  int z = 0;  // shell dimension, the microcanonical partition function
};

// (1/sqrt(Z)) sum_k e^{i phi_k} |s_k>|e_k> over the degenerate shell, with
// the first Z environment basis vectors and phases drawn from phase_seed.
MicrocanonicalState build_microcanonical(const Hamiltonian& h, const Rational& energy, int dim_e,
                                         std::uint64_t phase_seed);

// tr(rho_S H_S)
double internal_energy(const PureState& state, const Hamiltonian& h_s);

// <H_S^2> - <H_S>^2
double energy_variance(const PureState& state, const Hamiltonian& h_s);

struct MicrocanonicalReport {
  bool envariant_condition = false;   // rho_S maximally mixed on its support
  bool degenerate_condition = false;  // support inside a single shell
  bool pass = false;
  int support_dim = 0;
  double marginal_deviation = 0.0;  // max |p_k - 1/support_dim| on the support
  double energy_spread = 0.0;       // max |e_k - e_1| over support vectors
  double max_eigen_residual = 0.0;  // max ||H v - <v|H|v> v|| over support vectors
  int haar_checks = 0;
  int haar_passes = 0;
};

// Condition (i): the support marginal is even and a batch of seeded
// Haar-random unitaries acting inside the support all test envariant.
// Condition (ii): every support vector is an eigenvector of h_s and all
// their eigenvalues coincide.
MicrocanonicalReport verify_microcanonical(const PureState& state, const Hamiltonian& h_s,
                                           double tol = 1e-9, int haar_checks = 20,
                                           std::uint64_t seed = 0x5eed);

}  // namespace envstat
