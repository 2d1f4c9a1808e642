#pragma once

#include <Eigen/Core>
#include <optional>

#include "envstat/qstate.hpp"

namespace envstat {

enum class EnvarianceReason { MarginalNotPreserved, Constructed };

struct EnvarianceVerdict {
  bool envariant = false;
  std::optional<UnitaryOp> witness;  // the restoring environment unitary
  double residual = 1.0;             // 1 - fidelity after restoration
  EnvarianceReason reason = EnvarianceReason::MarginalNotPreserved;
  double marginal_mismatch = 0.0;    // max-abs of uS rho_S uS† - rho_S
};

// Restoration residual a witness must reach before a pair is called
// envariant.
inline constexpr double kRestorationTol = 1e-9;

// Decision criterion: uS is envariant for the state iff it preserves the
// reduced density matrix of S. Environment unitaries cannot change rho_S,
// and two purifications of the same rho_S over the same environment are
// related by an environment-side unitary, which the verdict carries as a
// constructive witness.
EnvarianceVerdict is_envariant(const PureState& state, const UnitaryOp& u_s, double tol = 1e-9);

// Witness construction: expand both the state and its image in one
// eigenbasis of rho_S; the per-eigenvector environment components of the two
// expansions are orthogonal families with matching norms, so mapping one
// onto the other (identity on the orthogonal complement of the environment
// support) is the restoring unitary. Degenerate eigenvalues need no special
// casing because a single shared eigenbasis is used throughout.
UnitaryOp construct_restoring(const PureState& state, const UnitaryOp& u_s, double tol = 1e-9);

// True iff the Schmidt rank equals dimS and all coefficients agree within
// tol (rho_S maximally mixed on all of S).
bool is_maximally_envariant(const PureState& state, double tol = 1e-9);

struct EquiprobabilityReport {
  Eigen::VectorXd probabilities;  // squared Schmidt coefficients
  bool equiprobable = false;
  double max_deviation = 0.0;  // max |p_k - 1/Z|
};

EquiprobabilityReport equiprobability(const PureState& state, double tol = 1e-9);

}  // namespace envstat
