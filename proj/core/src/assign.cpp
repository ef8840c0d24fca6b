#include "formation/assign.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <vector>

namespace formation {

namespace {

bool diagonal_input(const MultiAgentSystem& sys) {
  return sys.shape != SystemShape::GeneralA_TallB;
}

CVector diag_b(const MultiAgentSystem& sys) {
  return sys.B.diagonal().cast<Complex>();
}

bool diagonal_drift(const MultiAgentSystem& sys) {
  return sys.shape == SystemShape::DiagonalBoth;
}

/// Residual-scaled report for raw (generalized) eigenvector chains; the
/// independent full eigendecomposition lives in synthesize().
numeric::EigReport direct_report(const CMatrix& closed_loop, const EigenSpec& spec) {
  const CMatrix V = spec.stacked_vectors();
  const CVector lambdas = spec.eigenvalue_per_column();
  numeric::EigReport rep;
  rep.eigenvalues = lambdas;
  rep.right_eigenvectors = V;
  for (Index k = 0; k < V.cols(); ++k) {
    const double nrm = rep.right_eigenvectors.col(k).norm();
    if (nrm > 0.0) rep.right_eigenvectors.col(k) /= nrm;
  }
  rep.residual = 0.0;
  Index col = 0;
  for (const auto& blk : spec.blocks) {
    for (Index j = 0; j < blk.length(); ++j, ++col) {
      CVector r = closed_loop * V.col(col) - blk.eigenvalue * V.col(col);
      if (j > 0) r -= V.col(col - 1);
      rep.residual = std::max(rep.residual, r.norm() / std::max(1.0, V.col(col).norm()));
    }
  }
  return rep;
}

CMatrix gain_from_targets(const CMatrix& V, const CMatrix& W) {
  // F V = W  <=>  V^T F^T = W^T.
  try {
    return numeric::solve(CMatrix(V.transpose()), CMatrix(W.transpose())).transpose();
  } catch (const SingularMatrixError&) {
    throw DependentEigvectorsError("requested eigenvector matrix V is singular");
  }
}

SynthesisResult finish(const MultiAgentSystem& sys, const EigenSpec& spec, const CMatrix& V,
                       const CMatrix& W) {
  SynthesisResult out;
  out.F = gain_from_targets(V, W);
  out.W = W;
  out.closed_loop = sys.A.cast<Complex>() + sys.B.cast<Complex>() * out.F;
  out.achieved = direct_report(out.closed_loop, spec);
  out.graph = out.F.rows() == out.F.cols() ? extract_graph(out.F) : extract_graph(out.closed_loop);
  return out;
}

}  // namespace

KernelBasis kernel_basis(const MultiAgentSystem& sys, Complex lambda) {
  const Index n = sys.n();
  const Index m = sys.m();
  KernelBasis kb;
  kb.lambda = lambda;
  switch (sys.shape) {
    case SystemShape::DiagonalBoth:
      kb.N1 = sys.B.cast<Complex>();
      kb.N2 = sys.A.cast<Complex>() - lambda * CMatrix::Identity(n, n);
      break;
    case SystemShape::GeneralA_DiagonalB: {
      kb.N1 = sys.B.cast<Complex>();
      const CVector b = diag_b(sys);
      CMatrix shifted = sys.A.cast<Complex>() - lambda * CMatrix::Identity(n, n);
      // B^-1 (A - lambda I) B through diagonal scaling.
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          shifted(i, j) *= b(j) / b(i);
        }
      }
      kb.N2 = shifted;
      break;
    }
    case SystemShape::GeneralA_TallB: {
      const CMatrix shifted = sys.A.cast<Complex>() - lambda * CMatrix::Identity(n, n);
      const CMatrix B = sys.B.cast<Complex>();
      auto ls = numeric::lstsq(shifted, B);
      const double tol = 1e-9 * std::max(1.0, max_abs(B));
      if (ls.residual > tol) {
        std::ostringstream os;
        os << "kernel_basis: Im B not contained in Im(A - lambda I) for lambda = (" << lambda.real()
           << ", " << lambda.imag() << "), residual " << ls.residual;
        throw ImageConditionFailedError(os.str());
      }
      kb.N1 = ls.solution;
      kb.N2 = CMatrix::Identity(m, m);
      kb.closed_form = false;
      if (numeric::rank(kb.N1) < m) {
        throw SingularShiftError("kernel_basis: solved N1 is column-rank deficient");
      }
      break;
    }
  }
  return kb;
}

namespace detail {

std::pair<CMatrix, CMatrix> shift_system(const MultiAgentSystem& sys, Complex lambda) {
  const Index n = sys.n();
  const Index m = sys.m();
  const CMatrix shifted = lambda * CMatrix::Identity(n, n) - sys.A.cast<Complex>();
  if (diagonal_input(sys)) {
    // S1 = B, S2 = -B^-1 (lambda I - A) B - B^-1; works for any A with
    // invertible diagonal B.
    const CVector b = diag_b(sys);
    CMatrix S2 = shifted;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        S2(i, j) *= -b(j) / b(i);
      }
      S2(i, i) -= 1.0 / b(i);
    }
    return {sys.B.cast<Complex>(), S2};
  }
  CMatrix pencil(n, n + m);
  pencil.leftCols(n) = shifted;
  pencil.rightCols(m) = sys.B.cast<Complex>();
  auto ls = numeric::lstsq(pencil, CMatrix(-CMatrix::Identity(n, n)));
  const double scale = 1.0 + std::max(max_abs(pencil), std::abs(lambda));
  if (ls.residual > 1e-9 * scale) {
    throw SingularShiftSystemError("shift_system: [lambda I - A, B] is row-rank deficient");
  }
  return {ls.solution.topRows(n), ls.solution.bottomRows(m)};
}

SynthesisResult assign_simple_columns(const MultiAgentSystem& sys, const EigenSpec& spec) {
  const Index n = sys.n();
  const CMatrix V = spec.stacked_vectors();
  const CVector lambdas = spec.eigenvalue_per_column();
  CMatrix W(sys.m(), n);

  if (diagonal_input(sys)) {
    // N1 = B diagonal, so k_i = B^-1 v_i and w_i = -N2 k_i collapses to
    // B^-1 (lambda_i v_i - A v_i) for both diagonal-B shapes.
    const CVector b = diag_b(sys);
    const CVector a = diagonal_drift(sys) ? CVector(sys.A.diagonal().cast<Complex>()) : CVector();
    const CMatrix Ac = diagonal_drift(sys) ? CMatrix() : sys.A.cast<Complex>();
    for (Index i = 0; i < n; ++i) {
      const CVector v = V.col(i);
      CVector av = diagonal_drift(sys) ? CVector(a.cwiseProduct(v)) : CVector(Ac * v);
      W.col(i) = (lambdas(i) * v - av).cwiseQuotient(b);
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const KernelBasis kb = kernel_basis(sys, lambdas(i));
      auto ls = numeric::pinv_solve(kb.N1, V.col(i));
      const double tol = 1e-8 * std::max(1.0, V.col(i).norm());
      if (ls.residual > tol) {
        std::ostringstream os;
        os << "eigenvector " << i + 1 << " is not in Im N1(lambda), residual " << ls.residual;
        throw EigvecNotInImageError(i, ls.residual, os.str());
      }
      W.col(i) = -kb.N2 * ls.solution;
    }
  }
  return finish(sys, spec, V, W);
}

}  // namespace detail

SynthesisResult assign_distinct(const MultiAgentSystem& sys, const EigenSpec& spec) {
  if (!spec.all_simple()) {
    throw std::invalid_argument("assign_distinct: spec carries generalized eigenvectors");
  }
  if (spec.dimension() != sys.n()) {
    throw std::invalid_argument("assign_distinct: spec dimension does not match system");
  }
  const CVector lambdas = spec.eigenvalue_per_column();
  double scale = 1.0;
  for (Index i = 0; i < lambdas.size(); ++i) scale = std::max(scale, 1.0 + std::abs(lambdas(i)));
  for (Index i = 0; i < lambdas.size(); ++i) {
    for (Index j = i + 1; j < lambdas.size(); ++j) {
      if (std::abs(lambdas(i) - lambdas(j)) <= kEigenvalueDistinctTol * scale) {
        throw std::invalid_argument("assign_distinct: eigenvalues " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1) +
                                    " coincide at tolerance; use the Jordan path");
      }
    }
  }
  return detail::assign_simple_columns(sys, spec);
}

SynthesisResult assign_jordan(const MultiAgentSystem& sys, const EigenSpec& spec) {
  const Index n = sys.n();
  if (spec.dimension() != n) {
    throw std::invalid_argument("assign_jordan: spec dimension does not match system");
  }
  if (sys.shape == SystemShape::GeneralA_TallB && !is_controllable(sys)) {
    throw std::invalid_argument("assign_jordan: (A, B) must be controllable");
  }

  const CMatrix V = spec.stacked_vectors();
  CMatrix W(sys.m(), n);
  const bool diag_in = diagonal_input(sys);
  const CVector b = diag_in ? diag_b(sys) : CVector();

  Index col = 0;
  for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
    const auto& blk = spec.blocks[bi];
    const KernelBasis kb = kernel_basis(sys, blk.eigenvalue);
    CMatrix S1, S2;
    if (blk.length() > 1) {
      std::tie(S1, S2) = detail::shift_system(sys, blk.eigenvalue);
    }
    for (Index j = 0; j < blk.length(); ++j, ++col) {
      // Chain recursion (the worked generalized-eigenvector computation):
      //   v_ij = N1 p_ij + S1 v_i(j-1),   w_ij = -N2 p_ij - S2 v_i(j-1)
      // so that (lambda I - A - B F) v_ij = -v_i(j-1).
      CVector rhs = blk.chain[static_cast<std::size_t>(j)];
      if (j > 0) rhs -= S1 * blk.chain[static_cast<std::size_t>(j - 1)];
      CVector p;
      if (diag_in) {
        p = rhs.cwiseQuotient(b);
      } else {
        auto ls = numeric::pinv_solve(kb.N1, rhs);
        const double tol = 1e-8 * std::max(1.0, rhs.norm());
        if (ls.residual > tol) {
          std::ostringstream os;
          os << "chain equation for block " << bi + 1 << " position " << j + 1
             << " has no solution (residual " << ls.residual << ")";
          throw ChainUnsolvableError(static_cast<Index>(bi), j, ls.residual, os.str());
        }
        p = ls.solution;
      }
      CVector w = -kb.N2 * p;
      if (j > 0) w -= S2 * blk.chain[static_cast<std::size_t>(j - 1)];
      W.col(col) = w;
    }
  }
  return finish(sys, spec, V, W);
}

SynthesisResult synthesize(const MultiAgentSystem& sys, const EigenSpec& spec,
                           const SpecKind& kind) {
  const auto report = validate_spec(sys, spec, kind);
  if (!report.ok()) {
    std::string msg = "synthesize: spec validation failed:";
    for (const auto& v : report.violations) msg += "\n  - " + v;
    throw InvalidSpecError(msg);
  }

  SynthesisResult result;
  if (spec.all_simple()) {
    const CVector lambdas = spec.eigenvalue_per_column();
    double scale = 1.0;
    for (Index i = 0; i < lambdas.size(); ++i) scale = std::max(scale, 1.0 + std::abs(lambdas(i)));
    bool distinct = true;
    for (Index i = 0; i < lambdas.size() && distinct; ++i) {
      for (Index j = i + 1; j < lambdas.size(); ++j) {
        if (std::abs(lambdas(i) - lambdas(j)) <= kEigenvalueDistinctTol * scale) {
          distinct = false;
          break;
        }
      }
    }
    // Repeated eigenvalues with plain (non-generalized) eigenvectors use the
    // distinct-case formula unchanged.
    result = distinct ? assign_distinct(sys, spec) : detail::assign_simple_columns(sys, spec);
  } else {
    result = assign_jordan(sys, spec);
  }

  const double direct_residual = result.achieved.residual;
  const double scale = std::max(1.0, max_abs(result.closed_loop));
  if (direct_residual > 1e-8 * scale) {
    std::ostringstream os;
    os << "synthesize: achieved eigenstructure residual " << direct_residual
       << " exceeds 1e-8 * scale";
    throw AchievedMismatchError(os.str());
  }

  // Independent cross-check through the dense eigensolver. Defective blocks
  // of depth > 2 scatter computed eigenvalues by roughly eps^(1/depth), so
  // the multiset comparison is meaningful only for shallow chains; deeper
  // chains are covered by the direct residuals above.
  const auto full = numeric::eig(result.closed_loop);
  if (spec.max_chain_length() <= 2) {
    const CVector requested = spec.eigenvalue_per_column();
    std::vector<bool> used(static_cast<std::size_t>(requested.size()), false);
    double lam_scale = 1.0;
    for (Index i = 0; i < requested.size(); ++i) {
      lam_scale = std::max(lam_scale, std::abs(requested(i)));
    }
    for (Index i = 0; i < requested.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      Index best_j = -1;
      for (Index j = 0; j < full.eigenvalues.size(); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double d = std::abs(requested(i) - full.eigenvalues(j));
        if (d < best) {
          best = d;
          best_j = j;
        }
      }
      if (best_j < 0 || best > 1e-6 * lam_scale) {
        std::ostringstream os;
        os << "synthesize: eigenvalue (" << requested(i).real() << ", " << requested(i).imag()
           << ") not achieved (closest off by " << best << ")";
        throw AchievedMismatchError(os.str());
      }
      used[static_cast<std::size_t>(best_j)] = true;
    }
  }
  result.achieved = full;
  return result;
}

}  // namespace formation
