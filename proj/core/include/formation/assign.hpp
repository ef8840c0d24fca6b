#pragma once

#include "formation/graph.hpp"
#include "formation/model.hpp"
#include "formation/numeric.hpp"

namespace formation {

/// Basis [N1; N2] of Ker[lambda I - A, B], i.e. (lambda I - A) N1 + B N2 = 0,
/// with N1 of full column rank. closed_form marks analytic (shape-specific)
/// over numeric origin.
struct KernelBasis {
  Complex lambda;
  CMatrix N1;
  CMatrix N2;
  bool closed_form = true;
};

/// Outcome of one eigenstructure assignment: the gain F, the closed loop
/// A + B F, an eigenstructure report, the induced communication graph, and
/// the stacked w-vectors kept for audit.
struct SynthesisResult {
  CMatrix F;
  CMatrix closed_loop;
  numeric::EigReport achieved;
  CommGraph graph;
  CMatrix W;
};

/// Shape-specific kernel basis:
///   DiagonalBoth       N1 = B, N2 = A - lambda I
///   GeneralA_DiagonalB N1 = B, N2 = B^-1 (A - lambda I) B
///   GeneralA_TallB     N2 = I, N1 solves (A - lambda I) N1 = B
/// The tall path throws ImageConditionFailedError when Im B is not contained
/// in Im(A - lambda I) at tolerance, and SingularShiftError when the solved
/// N1 loses column rank.
KernelBasis kernel_basis(const MultiAgentSystem& sys, Complex lambda);

/// Distinct-eigenvalue assignment: w_i = -N2(lambda_i) k_i with
/// N1(lambda_i) k_i = v_i, then F = [w_1..w_n][v_1..v_n]^-1.
SynthesisResult assign_distinct(const MultiAgentSystem& sys, const EigenSpec& spec);

/// Repeated-eigenvalue assignment through generalized-eigenvector chains
/// (per-block shift solutions [lambda I - A, B][S1; S2] = -I).
SynthesisResult assign_jordan(const MultiAgentSystem& sys, const EigenSpec& spec);

/// Validates, routes to assign_distinct / the direct repeated-eigenvector
/// formula / assign_jordan, re-verifies through an independent
/// eigendecomposition, and attaches the communication graph.
SynthesisResult synthesize(const MultiAgentSystem& sys, const EigenSpec& spec,
                           const SpecKind& kind);

namespace detail {

/// Direct formula shared by assign_distinct and the repeated-but-simple
/// route of synthesize (rigid and circular specs): no distinctness check.
SynthesisResult assign_simple_columns(const MultiAgentSystem& sys, const EigenSpec& spec);

/// Any solution of [lambda I - A, B][S1; S2] = -I (closed form for diagonal
/// B, least squares otherwise).
std::pair<CMatrix, CMatrix> shift_system(const MultiAgentSystem& sys, Complex lambda);

}  // namespace detail

}  // namespace formation
