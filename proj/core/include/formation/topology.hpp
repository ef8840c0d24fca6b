#pragma once

#include <utility>
#include <vector>

#include "formation/assign.hpp"

namespace formation {

/// Absent-edge predicate: for each pair (i, j), true iff [lambda_2..lambda_n]
/// is orthogonal to [v_2i v*_2j ... v_ni v*_nj] where v*_k are the rows of
/// V^-1, i.e. entry (i, j) of the closed loop vanishes. Requires a
/// distinct-eigenvalue spec with lambda_1 = 0. Indices are 0-based.
std::vector<bool> predict_absent_edges(const EigenSpec& spec,
                                       const std::vector<std::pair<Index, Index>>& pairs);

/// Star topology rooted at agent 1: V = [f, e_2, ..., e_n] and eigenvalues
/// {0} + lambdas. Requires f_1 != 0 and n-1 distinct stable lambdas.
EigenSpec star_spec(const MultiAgentSystem& sys, const CVector& f, const CVector& lambdas);

/// Cyclic topology: eigenvalues {omega^k - 1} and V_ik = f_i omega^(i k)
/// with omega = exp(2 pi j / n). Requires every f_i != 0.
EigenSpec cyclic_spec(const MultiAgentSystem& sys, const CVector& f);

/// Line topology rooted at agent 1: lambda_1 = 0 plus a single chain at -1
/// with the anti-diagonal -f pattern. Requires every f_i != 0.
EigenSpec line_spec(const MultiAgentSystem& sys, const CVector& f);

/// Forbidden (receiver, sender) pairs: agent i must not read agent j.
struct TopologyConstraint {
  std::vector<std::pair<Index, Index>> forbidden;
};

struct ConstraintApplication {
  std::pair<Index, Index> pair;
  bool was_nonzero = false;  // false: entry already zero, row untouched
};

/// Result of zeroing constrained gain entries: the new gain, its spectrum,
/// and whether the formation conditions were re-verified successfully.
/// Verification failure is an outcome, not an error.
struct ConstrainedResult {
  CMatrix F_hat;
  CMatrix closed_loop;
  numeric::EigReport achieved;
  bool verified = false;
  CommGraph graph;
  std::vector<ConstraintApplication> applications;
};

/// Per constrained row i: solve the reduced least-squares system
/// Vhat^T Fhat_i^T = psi_i^T (psi = B^-1 (V J - A V)) with the forbidden
/// columns deleted, set those entries to exact zero, and re-check the
/// closed-loop conditions. Multiple constraints in a row are solved jointly;
/// rows without effective constraints stay bitwise equal to base.F.
ConstrainedResult constrain_zero(const MultiAgentSystem& sys, const EigenSpec& spec,
                                 const SynthesisResult& base, const TopologyConstraint& constraint);

/// Generator of all achievable formation configurations for the single-input
/// line system (bidiagonal A, B = [b_1; 0; ...; 0]):
/// [b_1/a_1, -a^_2 b_1/(a_1 a_2), ..., (-1)^(n-1) a^_2..a^_n b_1/(a_1..a_n)].
CVector simo_line_formation_set(const MultiAgentSystem& sys);

}  // namespace formation
