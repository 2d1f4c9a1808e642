#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>

#include "envstat/kernels.hpp"

namespace envstat {

// Normalized pure state on a bipartite tensor-product space, amplitudes laid
// out as amplitude(i, j) = amplitudes[i*dimE + j] for system index i and
// environment index j. Immutable value type.
class PureState {
 public:
  PureState(int dim_s, int dim_e, Eigen::VectorXcd amplitudes);

  // Rescales to unit norm before constructing; rejects the zero vector.
  static PureState normalized(int dim_s, int dim_e, Eigen::VectorXcd amplitudes);

  int dim_s() const { return dim_s_; }
  int dim_e() const { return dim_e_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  std::complex<double> amplitude(int i, int j) const {
    return amps_[static_cast<std::int64_t>(i) * dim_e_ + j];
  }

 private:
  int dim_s_;
  int dim_e_;
  Eigen::VectorXcd amps_;
};

class DensityMatrix {
 public:
  // Checks Hermiticity (1e-12) and unit trace (1e-12) up front; the
  // positivity check needs an eigensolve and lives in validate().
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& entries() const { return m_; }

  // Full invariant check including eigenvalues >= -1e-10.
  void validate() const;

 private:
  Eigen::MatrixXcd m_;
};

class UnitaryOp {
 public:
  // Requires U†U = I within 1e-10 (max-abs entrywise).
  explicit UnitaryOp(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& entries() const { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;  // non-negative, descending
  Eigen::MatrixXcd basis_s;      // dimS x rank, orthonormal columns
  Eigen::MatrixXcd basis_e;      // dimE x rank, orthonormal columns
  int rank = 0;
};

// Singular value decomposition of the dimS x dimE reshaped amplitude matrix;
// singular values below 1e-12 are truncated from the rank.
SchmidtDecomposition schmidt(const PureState& state);

// Sum_k a_k |s_k>|e_k> as a PureState (testing aid; inverse of schmidt up to
// global phase).
PureState reconstruct(const SchmidtDecomposition& sd, int dim_s, int dim_e);

DensityMatrix partial_trace(const PureState& state, Side keep);

PureState apply_local(const PureState& state, const UnitaryOp& u, Side side);

// -sum p ln p over the eigenvalues, in nats, with 0 ln 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);

// S(rho_S) + S(rho_E) - S(rho_SE); the global state is pure, so the joint
// term vanishes.
double mutual_information(const PureState& state);

// QR of a complex Gaussian matrix with the R-diagonal phases absorbed into
// Q; deterministic for a fixed seed.
UnitaryOp random_haar_unitary(int dim, std::uint64_t seed);

// |<a|b>|^2; states are always compared this way, never entrywise.
double fidelity(const PureState& a, const PureState& b);

}  // namespace envstat
