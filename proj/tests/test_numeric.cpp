#include <doctest.h>

#include "formation/numeric.hpp"
#include "reference_fixtures.hpp"
#include "test_util.hpp"

using namespace formation;
using ftest::cmat;
using ftest::cvec;
using ftest::kI;

TEST_SUITE_BEGIN("numeric");

TEST_CASE("solve: scalar and identity") {
  CMatrix m(1, 1);
  m(0, 0) = 2.0;
  CMatrix rhs(1, 1);
  rhs(0, 0) = 4.0;
  CHECK(std::abs(numeric::solve(m, rhs)(0, 0) - Complex(2.0, 0.0)) < 1e-15);

  const CMatrix id = CMatrix::Identity(3, 3);
  CMatrix any(3, 2);
  any << 1.0 + kI, 2.0, 3.0, -kI, 0.5, 4.0 - 2.0 * kI;
  CHECK(ftest::max_abs_diff(numeric::solve(id, any), any) < 1e-15);
}

TEST_CASE("solve: five-agent consensus eigenvector matrix against identity") {
  const CMatrix V = fixtures::consensus5_spec().stacked_vectors();
  const CMatrix X = numeric::solve(V, CMatrix(CMatrix::Identity(5, 5)));
  CHECK(ftest::max_abs_diff(V * X, CMatrix::Identity(5, 5)) < 1e-12);
}

TEST_CASE("solve: residual bound holds") {
  ftest::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.uniform(0, 6));
    CMatrix m(n, n), rhs(n, 2);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) m(i, j) = rng.complex_box();
      rhs(i, 0) = rng.complex_box();
      rhs(i, 1) = rng.complex_box();
    }
    const CMatrix x = numeric::solve(m, rhs);
    const double bound = 1e-10 * (1.0 + max_abs(m) * max_abs(x));
    CHECK(ftest::max_abs_diff(m * x, rhs) <= bound);
  }
}

TEST_CASE("solve: singular matrix throws") {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(numeric::solve(m, CMatrix(CMatrix::Identity(2, 2))), SingularMatrixError);
}

TEST_CASE("pinv_solve: exactly solvable tall system") {
  CMatrix m(2, 1);
  m << 1.0, 0.0;
  const auto ls = numeric::pinv_solve(m, cvec({3.0, 0.0}));
  CHECK(std::abs(ls.solution(0) - Complex(3.0, 0.0)) < 1e-14);
  CHECK(ls.residual < 1e-14);
}

TEST_CASE("pinv_solve: inconsistent system matches normal-equations oracle") {
  CMatrix m(2, 1);
  m << 1.0, 1.0;
  const CVector rhs = cvec({1.0, 0.0});
  // Oracle: solve (M^H M) x = M^H rhs directly.
  const CMatrix gram = m.adjoint() * m;
  const CVector oracle = numeric::solve(gram, CVector(m.adjoint() * rhs));
  CHECK(std::abs(oracle(0) - Complex(0.5, 0.0)) < 1e-15);
  const auto ls = numeric::pinv_solve(m, rhs);
  CHECK(std::abs(ls.solution(0) - oracle(0)) < 1e-14);
}

TEST_CASE("pinv_solve: constrained consensus row (reduced system)") {
  // V^T with the 4th column deleted, and the row-2 right-hand side.
  const CMatrix V = fixtures::consensus5_spec().stacked_vectors();
  CMatrix vhat(5, 4);
  const CMatrix vt = V.transpose();
  vhat << vt.col(0), vt.col(1), vt.col(2), vt.col(4);
  const CVector psi2 = cvec({0.0, -1.0, 0.0, 0.0, -4.0});
  const auto ls = numeric::pinv_solve(vhat, psi2);

  const CVector reference = cvec({1.8571, -1.4286, 0.8571, -1.2857});
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(ls.solution(i) - reference(i)) < 1e-3);
  }
  // Exact rationals from the normal equations.
  const CVector exact = cvec({13.0 / 7.0, -10.0 / 7.0, 6.0 / 7.0, -9.0 / 7.0});
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(ls.solution(i) - exact(i)) < 1e-12);
  }
}

TEST_CASE("pinv_solve: minimum-norm preimage of full-column-rank maps") {
  ftest::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.uniform(0, 4));
    const Index m = 1 + static_cast<Index>(rng.uniform(0, static_cast<double>(n - 1)));
    CMatrix a(n, m);
    CVector x0(m);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < m; ++j) a(i, j) = rng.complex_box();
    }
    for (Index j = 0; j < m; ++j) x0(j) = rng.complex_box();
    if (numeric::rank(a) < m) continue;
    const auto ls = numeric::pinv_solve(a, CVector(a * x0));
    CHECK((ls.solution - x0).norm() <= 1e-9 * (1.0 + x0.norm()));
  }
}

TEST_CASE("eig: diagonal ordering") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = -1.0;
  const auto rep = numeric::eig(m);
  CHECK(std::abs(rep.eigenvalues(0)) < 1e-14);
  CHECK(std::abs(rep.eigenvalues(1) - Complex(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("eig: constrained consensus closed loop") {
  // F-hat = reference consensus gain with row 2 replaced by the exact
  // least-squares row; single integrators, so the closed loop equals F-hat.
  CMatrix fhat = fixtures::consensus5_gain();
  fhat.row(1) = fixtures::consensus5_constrained_row().transpose();
  const auto rep = numeric::eig(fhat);
  const CVector expected = cvec({0.0, -1.4286, -2.0, -3.0, -4.0});
  for (Index i = 0; i < 5; ++i) {
    CHECK(std::abs(rep.eigenvalues(i) - expected(i)) < 1e-3);
  }
}

TEST_CASE("eig: reconstruction residual on random matrices") {
  ftest::Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix m(6, 6);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 6; ++j) m(i, j) = rng.complex_box();
    }
    const auto rep = numeric::eig(m);
    CHECK(rep.residual <= 1e-8 * max_abs(m) * 6.0);
    for (Index k = 0; k < 6; ++k) {
      CHECK(std::abs(rep.right_eigenvectors.col(k).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("eig: recovers a planted spectrum through a conditioned similarity") {
  ftest::Rng rng(37);
  const Index n = 5;
  const CVector planted = cvec({2.0, -1.0 + kI, -1.0 - kI, -3.0, 0.5 * kI});
  CMatrix v(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) v(i, j) = rng.complex_box();
  }
  REQUIRE(numeric::condition_number(v) < 1e6);
  const CMatrix m = v * planted.asDiagonal() * numeric::solve(v, CMatrix(CMatrix::Identity(n, n)));
  const auto rep = numeric::eig(m);
  // Greedy multiset match within 1e-6 relative.
  std::vector<bool> used(n, false);
  for (Index i = 0; i < n; ++i) {
    double best = 1e9;
    Index best_j = -1;
    for (Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(planted(i) - rep.eigenvalues(j));
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[static_cast<std::size_t>(best_j)] = true;
    CHECK(best <= 1e-6 * (1.0 + std::abs(planted(i))));
  }
}

TEST_CASE("rank and nullspace") {
  // [lambda I - A, B] for A = 0, B = I, lambda = -1 has a 2-dim kernel.
  CMatrix pencil(2, 4);
  pencil << -1.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 1.0;
  CHECK(numeric::nullspace(pencil).cols() == 2);

  CHECK(numeric::rank(CMatrix(CMatrix::Zero(2, 2))) == 0);

  CMatrix ones2(2, 2);
  ones2 << 1.0, 1.0, 1.0, 1.0;
  CHECK(numeric::rank(ones2) == 1);
  const CMatrix ns = numeric::nullspace(ones2);
  REQUIRE(ns.cols() == 1);
  CHECK(std::abs(ns.col(0).norm() - 1.0) < 1e-14);
  CHECK(ftest::max_abs_diff(ones2 * ns, CMatrix::Zero(2, 1)) < 1e-10 * max_abs(ones2));
  // Direction proportional to [1, -1]/sqrt(2).
  const Complex ratio = ns(0, 0) / ns(1, 0);
  CHECK(std::abs(ratio - Complex(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("rank: explicit tolerance overrides the default") {
  CMatrix m = CMatrix::Identity(3, 3);
  m(2, 2) = 1e-5;
  CHECK(numeric::rank(m) == 3);
  CHECK(numeric::rank(m, 1e-4) == 2);
}

TEST_CASE("nullspace columns are orthonormal and annihilated") {
  ftest::Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix m(3, 5);
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 5; ++j) m(i, j) = rng.complex_box();
    }
    const CMatrix ns = numeric::nullspace(m);
    CHECK(ns.cols() == 2);
    CHECK(ftest::max_abs_diff(ns.adjoint() * ns, CMatrix::Identity(2, 2)) < 1e-12);
    CHECK(ftest::max_abs_diff(m * ns, CMatrix::Zero(3, 2)) < 1e-10 * max_abs(m));
  }
}

TEST_SUITE_END();
