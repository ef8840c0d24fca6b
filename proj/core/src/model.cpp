#include "formation/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace formation {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_diagonal(const RMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

MultiAgentSystem make_diagonal_system(const RVector& a, const RVector& b) {
  require(a.size() == b.size(), "make_diagonal_system: a and b sizes differ");
  require(a.size() >= 1, "make_diagonal_system: need at least one agent");
  require(a.allFinite() && b.allFinite(), "make_diagonal_system: parameters must be finite");
  for (Index i = 0; i < b.size(); ++i) {
    require(b(i) != 0.0, "make_diagonal_system: b_" + std::to_string(i + 1) + " must be nonzero");
  }
  MultiAgentSystem sys;
  sys.A = a.asDiagonal();
  sys.B = b.asDiagonal();
  sys.shape = SystemShape::DiagonalBoth;
  return sys;
}

MultiAgentSystem make_coupled_system(const RMatrix& A, const RVector& b) {
  require(A.rows() == A.cols(), "make_coupled_system: A must be square");
  require(A.rows() == b.size(), "make_coupled_system: A and b sizes differ");
  require(A.allFinite() && b.allFinite(), "make_coupled_system: parameters must be finite");
  for (Index i = 0; i < b.size(); ++i) {
    require(b(i) != 0.0, "make_coupled_system: b_" + std::to_string(i + 1) + " must be nonzero");
  }
  MultiAgentSystem sys;
  sys.A = A;
  sys.B = b.asDiagonal();
  sys.shape = is_diagonal(A) ? SystemShape::DiagonalBoth : SystemShape::GeneralA_DiagonalB;
  return sys;
}

MultiAgentSystem make_tall_system(const RMatrix& A, const RVector& b_head) {
  require(A.rows() == A.cols(), "make_tall_system: A must be square");
  require(b_head.size() >= 1 && b_head.size() < A.rows(),
          "make_tall_system: need 1 <= m < n input channels");
  require(A.allFinite() && b_head.allFinite(), "make_tall_system: parameters must be finite");
  for (Index i = 0; i < b_head.size(); ++i) {
    require(b_head(i) != 0.0, "make_tall_system: b_" + std::to_string(i + 1) + " must be nonzero");
  }
  MultiAgentSystem sys;
  sys.A = A;
  sys.B = RMatrix::Zero(A.rows(), b_head.size());
  for (Index i = 0; i < b_head.size(); ++i) sys.B(i, i) = b_head(i);
  sys.shape = SystemShape::GeneralA_TallB;
  return sys;
}

Index EigenSpec::dimension() const {
  Index d = 0;
  for (const auto& blk : blocks) d += blk.length();
  return d;
}

bool EigenSpec::all_simple() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const JordanBlock& b) { return b.length() == 1; });
}

Index EigenSpec::max_chain_length() const {
  Index d = 0;
  for (const auto& blk : blocks) d = std::max(d, blk.length());
  return d;
}

CMatrix EigenSpec::stacked_vectors() const {
  const Index n = dimension();
  CMatrix V(formation.size(), n);
  Index col = 0;
  for (const auto& blk : blocks) {
    for (const auto& v : blk.chain) V.col(col++) = v;
  }
  return V;
}

CVector EigenSpec::eigenvalue_per_column() const {
  CVector lam(dimension());
  Index col = 0;
  for (const auto& blk : blocks) {
    for (Index j = 0; j < blk.length(); ++j) lam(col++) = blk.eigenvalue;
  }
  return lam;
}

EigenSpec make_simple_spec(const CVector& lambdas, const CMatrix& V, const CVector& f) {
  require(lambdas.size() == V.cols(), "make_simple_spec: eigenvalue count != column count");
  EigenSpec spec;
  spec.formation = f;
  spec.blocks.reserve(static_cast<std::size_t>(lambdas.size()));
  for (Index k = 0; k < lambdas.size(); ++k) {
    spec.blocks.push_back(JordanBlock{lambdas(k), {V.col(k)}});
  }
  return spec;
}

namespace {

double eigenvalue_scale(const EigenSpec& spec) {
  double s = 0.0;
  for (const auto& blk : spec.blocks) s = std::max(s, std::abs(blk.eigenvalue));
  return 1.0 + s;
}

bool near_zero_eigenvalue(Complex lambda, double scale) {
  return std::abs(lambda) <= kEigenvalueDistinctTol * scale;
}

bool parallel(const CVector& a, const CVector& b, double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  const Complex inner = (a.adjoint() * b)(0);
  return std::abs(inner) / (na * nb) > 1.0 - tol;
}

}  // namespace

ValidationReport validate_spec(const MultiAgentSystem& sys, const EigenSpec& spec,
                               const SpecKind& kind) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };

  const Index n = sys.n();
  if (spec.formation.size() != n) {
    fail("formation vector length " + std::to_string(spec.formation.size()) +
         " does not match agent count " + std::to_string(n));
    return report;
  }
  if (spec.formation.norm() == 0.0) fail("formation vector f must be nonzero");
  if (spec.dimension() != n) {
    fail("chain lengths sum to " + std::to_string(spec.dimension()) + ", expected " +
         std::to_string(n));
    return report;
  }
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& blk = spec.blocks[b];
    if (blk.chain.empty()) {
      fail("block " + std::to_string(b + 1) + " has an empty chain");
      return report;
    }
    for (const auto& v : blk.chain) {
      if (v.size() != n) {
        fail("block " + std::to_string(b + 1) + " has a chain vector of wrong length");
        return report;
      }
      if (!v.allFinite()) fail("block " + std::to_string(b + 1) + " has a non-finite chain vector");
    }
  }

  const double scale = eigenvalue_scale(spec);

  // Structural eigenvalues and eigenvectors per problem kind.
  std::vector<std::size_t> zero_blocks;
  std::vector<std::size_t> rate_blocks;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& blk = spec.blocks[b];
    if (near_zero_eigenvalue(blk.eigenvalue, scale)) zero_blocks.push_back(b);
    if (kind.problem == SpecKind::Problem::Circular &&
        std::abs(blk.eigenvalue - Complex(0.0, kind.rate)) <= kEigenvalueDistinctTol * scale) {
      rate_blocks.push_back(b);
    }
  }
  for (std::size_t b : zero_blocks) {
    if (spec.blocks[b].length() != 1) {
      fail("zero eigenvalue must not carry generalized eigenvectors");
    }
  }

  const CVector one = ones(n);
  switch (kind.problem) {
    case SpecKind::Problem::Scalable: {
      if (zero_blocks.size() != 1) {
        fail("scalable formation needs exactly one zero eigenvalue, found " +
             std::to_string(zero_blocks.size()));
      } else if (!parallel(spec.blocks[zero_blocks[0]].chain[0], spec.formation, 1e-8)) {
        fail("zero-eigenvalue eigenvector is not the formation vector f");
      }
      for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        if (std::find(zero_blocks.begin(), zero_blocks.end(), b) != zero_blocks.end()) continue;
        if (spec.blocks[b].eigenvalue.real() >= 0.0) {
          fail("non-structural eigenvalue " + std::to_string(b + 1) +
               " must have negative real part");
        }
      }
      break;
    }
    case SpecKind::Problem::Rigid: {
      if (kind.size <= 0.0) fail("rigid formation size d must be positive");
      if (zero_blocks.size() != 2) {
        fail("rigid formation needs exactly two zero eigenvalues, found " +
             std::to_string(zero_blocks.size()));
      } else {
        const CVector& u = spec.blocks[zero_blocks[0]].chain[0];
        const CVector& v = spec.blocks[zero_blocks[1]].chain[0];
        const bool ok_order =
            (parallel(u, one, 1e-8) && parallel(v, spec.formation, 1e-8)) ||
            (parallel(v, one, 1e-8) && parallel(u, spec.formation, 1e-8));
        if (!ok_order) fail("zero-eigenvalue eigenvectors must be 1 and f");
      }
      for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        if (std::find(zero_blocks.begin(), zero_blocks.end(), b) != zero_blocks.end()) continue;
        if (spec.blocks[b].eigenvalue.real() >= 0.0) {
          fail("non-structural eigenvalue " + std::to_string(b + 1) +
               " must have negative real part");
        }
      }
      break;
    }
    case SpecKind::Problem::Circular: {
      if (kind.rate == 0.0) fail("circular motion rate b must be nonzero");
      if (zero_blocks.size() != 1) {
        fail("circular motion needs exactly one zero eigenvalue, found " +
             std::to_string(zero_blocks.size()));
      } else if (!parallel(spec.blocks[zero_blocks[0]].chain[0], one, 1e-8)) {
        fail("zero-eigenvalue eigenvector must be the all-ones vector");
      }
      if (rate_blocks.size() != 1) {
        fail("circular motion needs exactly one eigenvalue b*j");
      } else {
        if (spec.blocks[rate_blocks[0]].length() != 1) {
          fail("the b*j eigenvalue must not carry generalized eigenvectors");
        } else if (!parallel(spec.blocks[rate_blocks[0]].chain[0], spec.formation, 1e-8)) {
          fail("the b*j eigenvector must be the formation vector f");
        }
      }
      for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        if (std::find(zero_blocks.begin(), zero_blocks.end(), b) != zero_blocks.end()) continue;
        if (std::find(rate_blocks.begin(), rate_blocks.end(), b) != rate_blocks.end()) continue;
        if (spec.blocks[b].eigenvalue.real() >= 0.0) {
          fail("non-structural eigenvalue " + std::to_string(b + 1) +
               " must have negative real part");
        }
      }
      break;
    }
  }

  // Chain-vector independence via the condition number of the stacked matrix.
  const CMatrix V = spec.stacked_vectors();
  const double cond = numeric::condition_number(V);
  if (!(cond < kIndependenceConditionLimit)) {
    std::ostringstream os;
    os << "chain vectors are dependent at tolerance (condition number " << cond << ")";
    fail(os.str());
  }

  report.self_conjugate = is_self_conjugate(spec);
  return report;
}

bool is_self_conjugate(const EigenSpec& spec) {
  const double scale = eigenvalue_scale(spec);
  const double tol = 1e-9;

  std::vector<bool> matched(spec.blocks.size(), false);
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    if (matched[i]) continue;
    const auto& bi = spec.blocks[i];
    bool found = false;
    for (std::size_t j = i; j < spec.blocks.size(); ++j) {
      if (matched[j] && j != i) continue;
      const auto& bj = spec.blocks[j];
      if (bj.length() != bi.length()) continue;
      if (std::abs(bj.eigenvalue - std::conj(bi.eigenvalue)) > tol * scale) continue;
      bool chains_conjugate = true;
      for (Index c = 0; c < bi.length() && chains_conjugate; ++c) {
        const double vscale = 1.0 + std::max(max_abs(bi.chain[c]), max_abs(bj.chain[c]));
        if (max_abs(CVector(bj.chain[c] - bi.chain[c].conjugate())) > tol * vscale) {
          chains_conjugate = false;
        }
      }
      if (!chains_conjugate) continue;
      matched[i] = true;
      matched[j] = true;
      found = true;
      break;
    }
    if (!found) return false;
  }
  return true;
}

bool is_controllable(const MultiAgentSystem& sys) {
  const Index n = sys.n();
  const CMatrix A = sys.A.cast<Complex>();
  const CMatrix B = sys.B.cast<Complex>();
  const auto report = numeric::eig(A);
  for (Index k = 0; k < n; ++k) {
    CMatrix pencil(n, n + sys.m());
    pencil.leftCols(n) = report.eigenvalues(k) * CMatrix::Identity(n, n) - A;
    pencil.rightCols(sys.m()) = B;
    if (numeric::rank(pencil) < n) return false;
  }
  return true;
}

}  // namespace formation
