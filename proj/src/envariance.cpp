#include "envstat/envariance.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

constexpr double kSupportCutoff = 1e-12;

using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct OrthoFrames {
  Eigen::MatrixXcd thin;        // orthonormal basis of the column span
  Eigen::MatrixXcd complement;  // orthonormal basis of its orthogonal complement
};

// Full QR with the R-diagonal phases absorbed into Q, so thin ~ V for
// already-orthonormal input instead of an arbitrarily rephased frame.
OrthoFrames orthonormal_frames(const Eigen::MatrixXcd& v) {
  const Eigen::Index n = v.rows(), r = v.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k < r; ++k) {
    const std::complex<double> d = qr.matrixQR()(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return {q.leftCols(r), q.rightCols(n - r)};
}

double marginal_mismatch(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u) {
  return (u * rho * u.adjoint() - rho).cwiseAbs().maxCoeff();
}

// Environment-side components of the state relative to the given rho_S
// eigenvectors, one normalized column per support eigenvector.
Eigen::MatrixXcd environment_components(const PureState& state, const Eigen::MatrixXcd& basis,
                                        const Eigen::VectorXd& weights) {
  Eigen::Map<const RowMat> m(state.amplitudes().data(), state.dim_s(), state.dim_e());
  Eigen::MatrixXcd rows = basis.adjoint() * m;  // r x dimE
  Eigen::MatrixXcd v = rows.transpose();        // dimE x r, column i = <f_i| state
  for (Eigen::Index i = 0; i < v.cols(); ++i) v.col(i) /= std::sqrt(weights[i]);
  return v;
}

UnitaryOp build_witness(const PureState& state, const PureState& eta,
                        const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const Eigen::Index dim = rho.rows();
  Eigen::Index first = 0;
  while (first < dim && es.eigenvalues()[first] <= kSupportCutoff) ++first;
  const Eigen::Index r = dim - first;

  const Eigen::MatrixXcd basis = es.eigenvectors().rightCols(r);
  const Eigen::VectorXd weights = es.eigenvalues().tail(r);
  const Eigen::MatrixXcd v_psi = environment_components(state, basis, weights);
  const Eigen::MatrixXcd v_eta = environment_components(eta, basis, weights);

  const OrthoFrames psi = orthonormal_frames(v_psi);
  const OrthoFrames eta_frames = orthonormal_frames(v_eta);

  Eigen::MatrixXcd u = psi.thin * eta_frames.thin.adjoint();
  if (eta_frames.complement.cols() > 0)
    u += eta_frames.complement * eta_frames.complement.adjoint();

  // Newton-Schulz polish toward the nearest unitary; a no-op for clean input.
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  for (int iter = 0; iter < 12; ++iter) {
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    if ((gram - id).cwiseAbs().maxCoeff() <= 1e-13) break;
    u = 0.5 * u * (3.0 * id - gram);
  }
  return UnitaryOp(std::move(u));
}

}  // namespace

EnvarianceVerdict is_envariant(const PureState& state, const UnitaryOp& u_s, double tol) {
  if (u_s.dim() != state.dim_s())
    throw validation_error("unitary dimension does not match the system side");

  const Eigen::MatrixXcd rho =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);

  EnvarianceVerdict verdict;
  verdict.marginal_mismatch = marginal_mismatch(rho, u_s.entries());
  if (verdict.marginal_mismatch > tol) {
    verdict.reason = EnvarianceReason::MarginalNotPreserved;
    return verdict;
  }

  const PureState eta = apply_local(state, u_s, Side::System);
  UnitaryOp witness = build_witness(state, eta, rho);
  const PureState restored = apply_local(eta, witness, Side::Environment);

  verdict.reason = EnvarianceReason::Constructed;
  verdict.residual = std::max(0.0, 1.0 - fidelity(restored, state));
  verdict.envariant = verdict.residual <= kRestorationTol;
  verdict.witness = std::move(witness);
  return verdict;
}

UnitaryOp construct_restoring(const PureState& state, const UnitaryOp& u_s, double tol) {
  if (u_s.dim() != state.dim_s())
    throw validation_error("unitary dimension does not match the system side");
  const Eigen::MatrixXcd rho =
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), Side::System);
  const double mismatch = marginal_mismatch(rho, u_s.entries());
  if (mismatch > tol) throw not_envariant_error(mismatch);
  const PureState eta = apply_local(state, u_s, Side::System);
  return build_witness(state, eta, rho);
}

bool is_maximally_envariant(const PureState& state, double tol) {
  const SchmidtDecomposition sd = schmidt(state);
  if (sd.rank != state.dim_s()) return false;
  return sd.coefficients.maxCoeff() - sd.coefficients.minCoeff() <= tol;
}

EquiprobabilityReport equiprobability(const PureState& state, double tol) {
  const SchmidtDecomposition sd = schmidt(state);
  EquiprobabilityReport report;
  report.probabilities = sd.coefficients.array().square();
  const double uniform = 1.0 / sd.rank;
  report.max_deviation = (report.probabilities.array() - uniform).abs().maxCoeff();
  report.equiprobable = report.max_deviation <= tol;
  return report;
}

}  // namespace envstat
