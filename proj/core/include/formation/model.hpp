#pragma once

#include <string>
#include <vector>

#include "formation/numeric.hpp"
#include "formation/types.hpp"

namespace formation {

/// Structural class of the (A, B) pair. The assignment engine picks its
/// kernel-basis closed form from this tag.
enum class SystemShape {
  DiagonalBoth,       // A, B diagonal, every b_i != 0
  GeneralA_DiagonalB, // arbitrary real A, B diagonal with nonzero diagonal
  GeneralA_TallB,     // arbitrary real A, B = [diag(b_1..b_m); 0] with m < n
};

/// n agents with first-order dynamics x' = A x + B u on the complex plane.
struct MultiAgentSystem {
  RMatrix A;
  RMatrix B;
  SystemShape shape = SystemShape::DiagonalBoth;

  Index n() const { return A.rows(); }
  Index m() const { return B.cols(); }
};

/// Independent agents x_i' = a_i x_i + b_i u_i; requires every b_i != 0.
MultiAgentSystem make_diagonal_system(const RVector& a, const RVector& b);

/// Arbitrarily coupled agents with diagonal input gain (b_i != 0).
MultiAgentSystem make_coupled_system(const RMatrix& A, const RVector& b);

/// Only the first m agents actuated: B = [diag(b_1..b_m); 0], m < n.
MultiAgentSystem make_tall_system(const RMatrix& A, const RVector& b_head);

/// One Jordan block of the requested closed-loop eigenstructure. chain[0] is
/// the eigenvector; chain[j] the j-th generalized eigenvector.
struct JordanBlock {
  Complex eigenvalue;
  std::vector<CVector> chain;

  Index length() const { return static_cast<Index>(chain.size()); }
};

/// Complete requested eigenstructure plus the formation configuration f.
/// Columns of stacked_vectors() follow block order, chains in order.
struct EigenSpec {
  std::vector<JordanBlock> blocks;
  CVector formation;

  Index dimension() const;
  bool all_simple() const;  // every chain has length 1
  Index max_chain_length() const;
  CMatrix stacked_vectors() const;
  /// Per-column eigenvalue of stacked_vectors() (blocks repeat theirs).
  CVector eigenvalue_per_column() const;
};

/// Convenience constructor for distinct-eigenvalue specs: column k of V is
/// the eigenvector for lambdas[k].
EigenSpec make_simple_spec(const CVector& lambdas, const CMatrix& V, const CVector& f);

/// Problem selector: scalable formation (limit c f), rigid formation of size
/// d (limit c 1 + d f e^{j theta}), or circular motion at rate b.
struct SpecKind {
  enum class Problem { Scalable, Rigid, Circular };
  Problem problem = Problem::Scalable;
  double size = 0.0;  // rigid d > 0
  double rate = 0.0;  // circular b != 0

  static SpecKind scalable() { return {Problem::Scalable, 0.0, 0.0}; }
  static SpecKind rigid(double d) { return {Problem::Rigid, d, 0.0}; }
  static SpecKind circular(double b) { return {Problem::Circular, 0.0, b}; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool self_conjugate = false;  // informational: true iff F will be real

  bool ok() const { return violations.empty(); }
};

/// Eigenvalues closer than this (relative to 1 + max |lambda|) are treated
/// as repeated when dispatching between the distinct and Jordan paths.
inline constexpr double kEigenvalueDistinctTol = 1e-9;

/// Chain-vector independence cutoff: condition number of the stacked
/// eigenvector matrix must stay below this.
inline constexpr double kIndependenceConditionLimit = 1e8;

/// Checks the standing assumptions for the given problem kind; violations
/// are reported, never thrown.
ValidationReport validate_spec(const MultiAgentSystem& sys, const EigenSpec& spec,
                               const SpecKind& kind);

/// True iff the eigenvalue multiset is closed under conjugation and paired
/// blocks have entrywise-conjugate chains (pairing tolerance 1e-9).
bool is_self_conjugate(const EigenSpec& spec);

/// PBH test: rank [lambda I - A, B] = n for every eigenvalue lambda of A.
bool is_controllable(const MultiAgentSystem& sys);

}  // namespace formation
