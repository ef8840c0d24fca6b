#include "formation/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace formation {

namespace {

void check_stable_distinct(const CVector& lambdas, Index expected, const char* who) {
  if (lambdas.size() != expected) {
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(expected) +
                                " eigenvalues, got " + std::to_string(lambdas.size()));
  }
  double scale = 1.0;
  for (Index i = 0; i < lambdas.size(); ++i) scale = std::max(scale, 1.0 + std::abs(lambdas(i)));
  for (Index i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas(i).real() < 0.0)) {
      throw std::invalid_argument(std::string(who) + ": eigenvalue " + std::to_string(i + 1) +
                                  " must have negative real part");
    }
    if (std::abs(lambdas(i)) <= kEigenvalueDistinctTol * scale) {
      throw std::invalid_argument(std::string(who) + ": eigenvalue " + std::to_string(i + 1) +
                                  " coincides with the structural zero");
    }
    for (Index j = i + 1; j < lambdas.size(); ++j) {
      if (std::abs(lambdas(i) - lambdas(j)) <= kEigenvalueDistinctTol * scale) {
        throw std::invalid_argument(std::string(who) + ": eigenvalues " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
}

}  // namespace

std::vector<bool> predict_absent_edges(const EigenSpec& spec,
                                       const std::vector<std::pair<Index, Index>>& pairs) {
  if (!spec.all_simple()) {
    throw std::invalid_argument("predict_absent_edges: spec must have distinct eigenvalues");
  }
  const Index n = spec.dimension();
  const CVector lambdas = spec.eigenvalue_per_column();
  double scale = 1.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, 1.0 + std::abs(lambdas(i)));
  Index zero_count = 0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lambdas(i)) <= kEigenvalueDistinctTol * scale) ++zero_count;
  }
  if (zero_count != 1) {
    throw std::invalid_argument(
        "predict_absent_edges: spec must carry exactly one zero eigenvalue");
  }

  const CMatrix V = spec.stacked_vectors();
  CMatrix Vinv;
  try {
    Vinv = numeric::solve(V, CMatrix(CMatrix::Identity(n, n)));
  } catch (const SingularMatrixError&) {
    throw SingularVError("predict_absent_edges: eigenvector matrix is singular");
  }

  std::vector<bool> absent;
  absent.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("predict_absent_edges: pair index out of range");
    }
    Complex sum = 0.0;
    double mag = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (std::abs(lambdas(k)) <= kEigenvalueDistinctTol * scale) continue;
      const Complex term = lambdas(k) * V(i, k) * Vinv(k, j);
      sum += term;
      mag += std::abs(term);
    }
    absent.push_back(std::abs(sum) <= 1e-9 * std::max(1.0, mag));
  }
  return absent;
}

EigenSpec star_spec(const MultiAgentSystem& sys, const CVector& f, const CVector& lambdas) {
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("star_spec: f length mismatch");
  if (f(0) == Complex(0.0, 0.0)) {
    throw RootComponentZeroError("star_spec: f_1 must be nonzero (root component)");
  }
  check_stable_distinct(lambdas, n - 1, "star_spec");

  CMatrix V = CMatrix::Identity(n, n);
  V.col(0) = f;
  CVector lam(n);
  lam(0) = 0.0;
  lam.tail(n - 1) = lambdas;
  return make_simple_spec(lam, V, f);
}

EigenSpec cyclic_spec(const MultiAgentSystem& sys, const CVector& f) {
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("cyclic_spec: f length mismatch");
  for (Index i = 0; i < n; ++i) {
    if (f(i) == Complex(0.0, 0.0)) {
      throw ZeroComponentError("cyclic_spec: f_" + std::to_string(i + 1) + " must be nonzero");
    }
  }
  // omega^p via polar form with the exponent reduced mod n.
  const auto omega_pow = [n](Index p) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(p % n) /
                               static_cast<double>(n));
  };
  CVector lam(n);
  CMatrix V(n, n);
  for (Index k = 0; k < n; ++k) {
    lam(k) = omega_pow(k) - 1.0;
    for (Index i = 0; i < n; ++i) {
      V(i, k) = f(i) * omega_pow(i * k);
    }
  }
  lam(0) = 0.0;  // omega^0 - 1 exactly
  return make_simple_spec(lam, V, f);
}

EigenSpec line_spec(const MultiAgentSystem& sys, const CVector& f) {
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("line_spec: f length mismatch");
  for (Index i = 0; i < n; ++i) {
    if (f(i) == Complex(0.0, 0.0)) {
      throw ZeroComponentError("line_spec: f_" + std::to_string(i + 1) + " must be nonzero");
    }
  }
  EigenSpec spec;
  spec.formation = f;
  spec.blocks.push_back(JordanBlock{Complex(0.0, 0.0), {f}});
  if (n > 1) {
    JordanBlock chain;
    chain.eigenvalue = Complex(-1.0, 0.0);
    for (Index k = 1; k < n; ++k) {
      // Chain vector k: entries -f_i on the last k rows.
      CVector v = CVector::Zero(n);
      for (Index i = n - k; i < n; ++i) v(i) = -f(i);
      chain.chain.push_back(v);
    }
    spec.blocks.push_back(std::move(chain));
  }
  return spec;
}

ConstrainedResult constrain_zero(const MultiAgentSystem& sys, const EigenSpec& spec,
                                 const SynthesisResult& base, const TopologyConstraint& constraint) {
  const Index n = sys.n();
  if (sys.shape == SystemShape::GeneralA_TallB) {
    throw std::invalid_argument("constrain_zero: requires an invertible (diagonal) input matrix");
  }
  if (!spec.all_simple()) {
    throw std::invalid_argument("constrain_zero: requires a distinct-eigenvalue spec");
  }
  if (base.F.rows() != n || base.F.cols() != n) {
    throw std::invalid_argument("constrain_zero: base gain dimension mismatch");
  }

  const double tau = 1e-9 * std::max(1.0, max_abs(base.F));
  ConstrainedResult out;
  out.applications.reserve(constraint.forbidden.size());

  // Group constrained columns by row; a row is re-solved only when at least
  // one of its constrained entries is currently nonzero.
  std::map<Index, std::vector<Index>> row_columns;
  std::map<Index, bool> row_effective;
  for (const auto& [i, j] : constraint.forbidden) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("constrain_zero: invalid constraint pair");
    }
    const bool nonzero = std::abs(base.F(i, j)) > tau;
    out.applications.push_back({{i, j}, nonzero});
    row_columns[i].push_back(j);
    row_effective[i] = row_effective[i] || nonzero;
  }

  const CMatrix V = spec.stacked_vectors();
  const CVector lambdas = spec.eigenvalue_per_column();
  const CVector b = sys.B.diagonal().cast<Complex>();
  // psi = B^-1 (V J - A V); row i is the right-hand side for gain row i.
  const CMatrix VJ = V * lambdas.asDiagonal();
  const CMatrix AV = sys.A.cast<Complex>() * V;
  CMatrix psi = VJ - AV;
  for (Index i = 0; i < n; ++i) psi.row(i) /= b(i);

  out.F_hat = base.F;
  for (const auto& [row, cols] : row_columns) {
    if (!row_effective[row]) continue;
    std::vector<Index> removed(cols.begin(), cols.end());
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    const Index kept = n - static_cast<Index>(removed.size());

    CMatrix Vhat_t(n, kept);
    std::vector<Index> kept_cols;
    kept_cols.reserve(static_cast<std::size_t>(kept));
    for (Index j = 0; j < n; ++j) {
      if (!std::binary_search(removed.begin(), removed.end(), j)) {
        Vhat_t.col(static_cast<Index>(kept_cols.size())) = V.transpose().col(j);
        kept_cols.push_back(j);
      }
    }
    if (numeric::rank(Vhat_t) < kept) {
      throw ReducedSystemDegenerateError("constrain_zero: reduced system for row " +
                                         std::to_string(row + 1) + " is rank deficient");
    }
    const CVector rhs = psi.row(row).transpose();
    const auto ls = numeric::pinv_solve(Vhat_t, rhs);
    out.F_hat.row(row).setZero();
    for (std::size_t k = 0; k < kept_cols.size(); ++k) {
      out.F_hat(row, kept_cols[k]) = ls.solution(static_cast<Index>(k));
    }
  }

  out.closed_loop = sys.A.cast<Complex>() + sys.B.cast<Complex>() * out.F_hat;
  out.achieved = numeric::eig(out.closed_loop);
  out.graph = extract_graph(out.F_hat);

  // Formation conditions on the new spectrum: one zero mode aligned with f,
  // everything else strictly stable.
  const double scale = std::max(1.0, max_abs(out.closed_loop));
  Index zero_index = -1;
  Index zero_count = 0;
  bool stable = true;
  for (Index k = 0; k < out.achieved.eigenvalues.size(); ++k) {
    const Complex lam = out.achieved.eigenvalues(k);
    if (std::abs(lam) < 1e-7 * scale) {
      ++zero_count;
      zero_index = k;
    } else if (!(lam.real() < -1e-7 * scale)) {
      stable = false;
    }
  }
  bool aligned = false;
  if (zero_count == 1) {
    const CVector v = out.achieved.right_eigenvectors.col(zero_index);
    const double cosv =
        std::abs((spec.formation.adjoint() * v)(0)) / (spec.formation.norm() * v.norm());
    aligned = cosv > 1.0 - 1e-7;
  }
  out.verified = (zero_count == 1) && stable && aligned;
  return out;
}

CVector simo_line_formation_set(const MultiAgentSystem& sys) {
  const Index n = sys.n();
  const bool single_input_line =
      sys.m() == 1 && (sys.shape == SystemShape::GeneralA_TallB || n == 1);
  if (!single_input_line) {
    throw std::invalid_argument("simo_line_formation_set: system must be single-input tall");
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j != i && j != i - 1 && sys.A(i, j) != 0.0) {
        throw std::invalid_argument("simo_line_formation_set: A must be lower bidiagonal");
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (sys.A(i, i) == 0.0) {
      throw ZeroDiagonalError("simo_line_formation_set: a_" + std::to_string(i + 1) +
                              " must be nonzero");
    }
  }
  CVector g(n);
  g(0) = sys.B(0, 0) / sys.A(0, 0);
  for (Index i = 1; i < n; ++i) {
    g(i) = -g(i - 1) * sys.A(i, i - 1) / sys.A(i, i);
  }
  return g;
}

}  // namespace formation
