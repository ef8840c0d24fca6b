#pragma once

#include <optional>
#include <vector>

#include "formation/assign.hpp"

namespace formation {

/// Rigid-formation controller: linear gain plus the leader-pair size term.
/// The closed loop of F has two plain zero eigenvectors (1 and f); agents 1
/// and 2 are the only roots and carry the nonlinear distance control.
struct RigidController {
  CMatrix F;
  CMatrix closed_loop;
  double d = 0.0;
  CVector f;
  std::pair<Index, Index> leader_pair{0, 1};
};

/// Two zero eigenvalues with (non-generalized) eigenvectors 1 and f,
/// completion e_3..e_n: V = [1, f, e_3, ..., e_n]. Requires f independent of
/// 1 and f_1 != f_2 (the leader pair must be separated).
EigenSpec rigid_spec(const MultiAgentSystem& sys, const CVector& f, const CVector& lambdas);

/// Bundles a rigid synthesis with the size parameter; DiagonalBoth only.
RigidController make_rigid_controller(const MultiAgentSystem& sys, const SynthesisResult& result,
                                      const CVector& f, double d);

/// x' = (A + B F) x + [r(x_1, x_2); -r(x_1, x_2); 0] with
/// r = (x_2 - x_1)(|x_2 - x_1|^2 - d^2 |f_2 - f_1|^2).
CVector rigid_rhs(const RigidController& ctrl, const CVector& x, double t);

/// Eigenvalues {0, b j} with eigenvectors 1 and f plus n-2 stable modes on
/// standard-basis completion columns. The default completion e_3..e_n falls
/// back to a rotated pair of excluded rows when it would make V singular;
/// an explicit completion (row indices receiving basis columns) overrides.
EigenSpec circular_spec(const MultiAgentSystem& sys, const CVector& f, double b,
                        const CVector& lambdas,
                        const std::optional<std::vector<Index>>& completion = std::nullopt);

}  // namespace formation
