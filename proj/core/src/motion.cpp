#include "formation/motion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace formation {

namespace {

bool parallel_to_ones(const CVector& f) {
  const CVector one = ones(f.size());
  const double nf = f.norm();
  if (nf == 0.0) return true;
  const Complex inner = (one.adjoint() * f)(0);
  return std::abs(inner) / (one.norm() * nf) > 1.0 - 1e-9;
}

void check_stable_distinct(const CVector& lambdas, Index expected, const char* who) {
  if (lambdas.size() != expected) {
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(expected) +
                                " stable eigenvalues, got " + std::to_string(lambdas.size()));
  }
  double scale = 1.0;
  for (Index i = 0; i < lambdas.size(); ++i) scale = std::max(scale, 1.0 + std::abs(lambdas(i)));
  for (Index i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas(i).real() < 0.0)) {
      throw std::invalid_argument(std::string(who) + ": eigenvalue " + std::to_string(i + 1) +
                                  " must have negative real part");
    }
    for (Index j = i + 1; j < lambdas.size(); ++j) {
      if (std::abs(lambdas(i) - lambdas(j)) <= kEigenvalueDistinctTol * scale) {
        throw std::invalid_argument(std::string(who) + ": eigenvalues " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
}

EigenSpec structured_pair_spec(const CVector& f, Complex second_eigenvalue,
                               const CVector& lambdas, const std::vector<Index>& completion) {
  const Index n = f.size();
  EigenSpec spec;
  spec.formation = f;
  spec.blocks.push_back(JordanBlock{Complex(0.0, 0.0), {ones(n)}});
  spec.blocks.push_back(JordanBlock{second_eigenvalue, {f}});
  for (std::size_t k = 0; k < completion.size(); ++k) {
    CVector e = CVector::Zero(n);
    e(completion[k]) = 1.0;
    spec.blocks.push_back(JordanBlock{lambdas(static_cast<Index>(k)), {e}});
  }
  return spec;
}

}  // namespace

EigenSpec rigid_spec(const MultiAgentSystem& sys, const CVector& f, const CVector& lambdas) {
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("rigid_spec: f length mismatch");
  if (parallel_to_ones(f)) {
    throw DependentPairError("rigid_spec: f is parallel to the all-ones vector");
  }
  check_stable_distinct(lambdas, n - 2, "rigid_spec");
  const double fscale = 1.0 + max_abs(f);
  if (std::abs(f(0) - f(1)) <= 1e-9 * fscale) {
    throw std::invalid_argument(
        "rigid_spec: f_1 = f_2 makes [1, f, e_3..e_n] singular; the leader pair must be separated");
  }
  std::vector<Index> completion;
  for (Index i = 2; i < n; ++i) completion.push_back(i);
  return structured_pair_spec(f, Complex(0.0, 0.0), lambdas, completion);
}

RigidController make_rigid_controller(const MultiAgentSystem& sys, const SynthesisResult& result,
                                      const CVector& f, double d) {
  if (sys.shape != SystemShape::DiagonalBoth) {
    throw std::invalid_argument("make_rigid_controller: system must be DiagonalBoth");
  }
  if (!(d > 0.0)) throw std::invalid_argument("make_rigid_controller: d must be positive");
  RigidController ctrl;
  ctrl.F = result.F;
  ctrl.closed_loop = result.closed_loop;
  ctrl.d = d;
  ctrl.f = f;
  return ctrl;
}

CVector rigid_rhs(const RigidController& ctrl, const CVector& x, double /*t*/) {
  if (x.size() != ctrl.closed_loop.rows()) {
    throw std::invalid_argument("rigid_rhs: state dimension mismatch");
  }
  CVector dx = ctrl.closed_loop * x;
  const auto [p, q] = ctrl.leader_pair;
  const Complex delta = x(q) - x(p);
  const double target = ctrl.d * std::abs(ctrl.f(q) - ctrl.f(p));
  const Complex r = delta * (std::norm(delta) - target * target);
  dx(p) += r;
  dx(q) -= r;
  return dx;
}

EigenSpec circular_spec(const MultiAgentSystem& sys, const CVector& f, double b,
                        const CVector& lambdas,
                        const std::optional<std::vector<Index>>& completion) {
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("circular_spec: f length mismatch");
  if (b == 0.0) throw std::invalid_argument("circular_spec: rate b must be nonzero");
  if (parallel_to_ones(f)) {
    throw DependentPairError("circular_spec: f is parallel to the all-ones vector");
  }
  check_stable_distinct(lambdas, n - 2, "circular_spec");

  std::vector<Index> cols;
  if (completion) {
    cols = *completion;
    if (static_cast<Index>(cols.size()) != n - 2) {
      throw std::invalid_argument("circular_spec: completion must name n-2 rows");
    }
    for (Index c : cols) {
      if (c < 0 || c >= n) throw std::invalid_argument("circular_spec: completion row out of range");
    }
  } else {
    // Excluding rows {p, p+1} keeps V invertible iff f_p != f_p+1; rotate
    // the excluded pair until that holds.
    const double fscale = 1.0 + max_abs(f);
    Index shift = -1;
    for (Index s = 0; s < n; ++s) {
      const Index p = s;
      const Index q = (s + 1) % n;
      if (std::abs(f(p) - f(q)) > 1e-9 * fscale) {
        shift = s;
        break;
      }
    }
    if (shift < 0) {
      throw DependentPairError("circular_spec: no completion keeps [1, f, e..] independent");
    }
    for (Index i = 0; i < n; ++i) {
      if (i != shift && i != (shift + 1) % n) cols.push_back(i);
    }
  }
  return structured_pair_spec(f, Complex(0.0, b), lambdas, cols);
}

}  // namespace formation
