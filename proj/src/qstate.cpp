#include "envstat/qstate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kSchmidtCutoff = 1e-12;

double squared_norm_compensated(const Eigen::VectorXcd& v) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double term = std::norm(v[i]);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

PureState::PureState(int dim_s, int dim_e, Eigen::VectorXcd amplitudes)
    : dim_s_(dim_s), dim_e_(dim_e), amps_(std::move(amplitudes)) {
  if (dim_s_ < 1 || dim_e_ < 1) throw validation_error("state dimensions must be positive");
  if (amps_.size() != static_cast<Eigen::Index>(dim_s_) * dim_e_)
    throw validation_error("amplitude vector length does not match dimS*dimE");
  if (std::abs(squared_norm_compensated(amps_) - 1.0) > kNormTol)
    throw validation_error("state is not normalized");
}

PureState PureState::normalized(int dim_s, int dim_e, Eigen::VectorXcd amplitudes) {
  const double n2 = squared_norm_compensated(amplitudes);
  if (n2 < 1e-300) throw validation_error("cannot normalize the zero vector");
  amplitudes /= std::sqrt(n2);
  return PureState(dim_s, dim_e, std::move(amplitudes));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols())
    throw validation_error("density matrix must be square and non-empty");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw validation_error("density matrix is not Hermitian");
  if (std::abs(m_.trace().real() - 1.0) > kNormTol || std::abs(m_.trace().imag()) > kNormTol)
    throw validation_error("density matrix trace is not 1");
}

void DensityMatrix::validate() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw validation_error("density matrix has a negative eigenvalue");
}

UnitaryOp::UnitaryOp(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols())
    throw validation_error("unitary must be square and non-empty");
  const Eigen::MatrixXcd gram = m_.adjoint() * m_;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > kUnitaryTol)
    throw validation_error("matrix is not unitary within tolerance");
}

SchmidtDecomposition schmidt(const PureState& state) {
  using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(state.amplitudes().data(), state.dim_s(), state.dim_e());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  int rank = 0;
  while (rank < sv.size() && sv[rank] > kSchmidtCutoff) ++rank;
  if (rank == 0) rank = 1;  // normalized input always has at least one branch

  SchmidtDecomposition sd;
  sd.rank = rank;
  sd.coefficients = sv.head(rank);
  sd.basis_s = svd.matrixU().leftCols(rank);
  sd.basis_e = svd.matrixV().leftCols(rank).conjugate();
  return sd;
}

PureState reconstruct(const SchmidtDecomposition& sd, int dim_s, int dim_e) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_s) * dim_e);
  for (int k = 0; k < sd.rank; ++k)
    for (int i = 0; i < dim_s; ++i)
      for (int j = 0; j < dim_e; ++j)
        amps[static_cast<Eigen::Index>(i) * dim_e + j] +=
            sd.coefficients[k] * sd.basis_s(i, k) * sd.basis_e(j, k);
  return PureState::normalized(dim_s, dim_e, std::move(amps));
}

DensityMatrix partial_trace(const PureState& state, Side keep) {
  return DensityMatrix(
      kernels::reduce_density(state.amplitudes(), state.dim_s(), state.dim_e(), keep));
}

PureState apply_local(const PureState& state, const UnitaryOp& u, Side side) {
  const int expected = side == Side::System ? state.dim_s() : state.dim_e();
  if (u.dim() != expected)
    throw validation_error("unitary dimension does not match the selected side");
  return PureState(state.dim_s(), state.dim_e(),
                   kernels::apply_side(state.amplitudes(), u.entries(), state.dim_s(),
                                       state.dim_e(), side));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::clamp(s, 0.0, std::log(static_cast<double>(rho.dim())));
}

double mutual_information(const PureState& state) {
  return von_neumann_entropy(partial_trace(state, Side::System)) +
         von_neumann_entropy(partial_trace(state, Side::Environment));
}

UnitaryOp random_haar_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw validation_error("unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const std::complex<double> r = qr.matrixQR()(k, k);
    const double mag = std::abs(r);
    q.col(k) *= mag > 0.0 ? r / mag : 1.0;
  }
  return UnitaryOp(std::move(q));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim_s() != b.dim_s() || a.dim_e() != b.dim_e())
    throw validation_error("fidelity requires states of identical dimensions");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace envstat
