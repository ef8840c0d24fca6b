#pragma once

// Reference problems used as golden fixtures across the test
// suites: the five-agent heterogeneous plant with its pentagon / rigid /
// encircling gain matrices, the five-integrator consensus problem with a
// topology constraint, and the four-integrator square/consensus problems.

#include <cmath>

#include "formation/model.hpp"
#include "test_util.hpp"

namespace fixtures {

using ftest::cmat;
using ftest::cvec;
using ftest::kI;
using ftest::rvec;
using namespace formation;

// -- five-integrator consensus with constrained gain --------------------------

inline MultiAgentSystem integrators(Index n) {
  return make_diagonal_system(RVector::Zero(n), RVector::Ones(n));
}

inline EigenSpec consensus5_spec() {
  const CMatrix V = cmat({{1, 0, 0, 0, 0},
                          {1, 1, 0, 0, 1},
                          {1, 0, 1, 1, -1},
                          {1, 0, 0, 1, 0},
                          {1, 0, 1, 0, 1}});
  const CVector lambdas = cvec({0, -1, -2, -3, -4});
  return make_simple_spec(lambdas, V, CVector::Ones(5));
}

inline CMatrix consensus5_gain() {
  return cmat({{0, 0, 0, 0, 0},
               {2.5, -1, 1.5, -1.5, -1.5},
               {2, 0, -3, 0, 1},
               {3, 0, 0, -3, 0},
               {3, 0, 1, -1, -3}});
}

/// Exact least-squares row after forbidding the (2,4) entry: multiples of 1/7.
inline CVector consensus5_constrained_row() {
  return cvec({13.0 / 7.0, -10.0 / 7.0, 6.0 / 7.0, 0.0, -9.0 / 7.0});
}

// -- five-agent heterogeneous plant -------------------------------------------

inline MultiAgentSystem hetero5() {
  return make_diagonal_system(rvec({1.6, 4.7, 3.0, -0.7, -4.2}),
                              rvec({0.2, 1.5, -0.5, -3.3, -3.7}));
}

inline CVector pentagon_f() {
  CVector f(5);
  for (Index i = 0; i < 5; ++i) {
    f(i) = std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(i + 1) / 5.0);
  }
  return f;
}

inline EigenSpec pentagon_spec() {
  const CVector f = pentagon_f();
  CMatrix V(5, 5);
  V.col(0) = f;
  V.col(1) = cvec({-1, 1, -2, -2, -2});
  V.col(2) = cvec({0, 0, -1, 0, 0});
  V.col(3) = cvec({0, 0, 1, -1, -2});
  V.col(4) = cvec({0, 0, 0, 0, 1});
  return make_simple_spec(cvec({0, -1, -2, -3, -4}), V, f);
}

inline CMatrix pentagon_gain() {
  return cmat({{-10.5 - 1.8164 * kI, 2.5 - 1.8164 * kI, 0, 0, 0},
               {0.3333 + 0.2422 * kI, -3.4667 + 0.2422 * kI, 0, 0, 0},
               {-0.4721 - 2.3511 * kI, -0.4721 - 2.3511 * kI, 10, -2, 0},
               {-0.0442 - 0.4403 * kI, 1.1679 - 0.4403 * kI, 0, 0.697, 0},
               {-0.3979 + 0.4391 * kI, 0.1427 + 0.4391 * kI, 0, -0.5405, -0.0541}});
}

inline CVector pentagon_x0() {
  return cvec({1.0 + kI, 1.0 - 0.5 * kI, 1.0, kI, -1.0 + kI});
}

inline EigenSpec rigid_pentagon_spec() {
  const CVector f = pentagon_f();
  EigenSpec spec;
  spec.formation = f;
  spec.blocks.push_back(JordanBlock{Complex(0, 0), {CVector::Ones(5)}});
  spec.blocks.push_back(JordanBlock{Complex(0, 0), {f}});
  const CVector lam = cvec({-1, -2, -3});
  for (Index k = 0; k < 3; ++k) {
    CVector e = CVector::Zero(5);
    e(k + 2) = 1.0;
    spec.blocks.push_back(JordanBlock{lam(k), {e}});
  }
  return spec;
}

inline CMatrix rigid_pentagon_gain() {
  return cmat({{-8, 0, 0, 0, 0},
               {0, -3.1333, 0, 0, 0},
               {0.618 + 1.9021 * kI, -2.618 - 1.9021 * kI, 8, 0, 0},
               {-0.303 + 0.9326 * kI, -0.303 - 0.9326 * kI, 0, 0.3939, 0},
               {-1.0614 + 0.7711 * kI, 0.2506 - 0.7711 * kI, 0, 0, -0.3243}});
}

// -- target encircling (augmented six-agent plant) -----------------------------

inline MultiAgentSystem encircle6() {
  return make_diagonal_system(rvec({1.6, 4.7, 3.0, -0.7, -4.2, 0.0}),
                              rvec({0.2, 1.5, -0.5, -3.3, -3.7, 1.0}));
}

inline CVector encircle_f() {
  CVector f(6);
  f.head(5) = pentagon_f();
  f(5) = 0.0;
  return f;
}

inline EigenSpec encircle_spec() {
  const CVector f = encircle_f();
  EigenSpec spec;
  spec.formation = f;
  spec.blocks.push_back(JordanBlock{Complex(0, 0), {CVector::Ones(6)}});
  spec.blocks.push_back(JordanBlock{kI, {f}});
  const CVector lam = cvec({-1, -2, -3, -4});
  for (Index k = 0; k < 4; ++k) {
    CVector e = CVector::Zero(6);
    e(k + 1) = 1.0;  // completion rows 2..5
    spec.blocks.push_back(JordanBlock{lam(k), {e}});
  }
  return spec;
}

inline CMatrix encircle_gain() {
  return cmat(
      {{-8.0 + 5.0 * kI, 0, 0, 0, 0, -5.0 * kI},
       {-0.428 + 0.84 * kI, -3.8, 0, 0, 0, 1.0947 - 0.84 * kI},
       {4.4116 - 0.7331 * kI, 0, 10, 0, 0, -8.4116 + 0.7331 * kI},
       {0.5574 + 0.7795 * kI, 0, 0, 0.697, 0, -1.4664 - 0.7795 * kI},
       {-0.5911 + 0.9447 * kI, 0, 0, 0, -0.0541, -0.49 - 0.9447 * kI},
       {0, 0, 0, 0, 0, 0}});
}

inline CVector encircle_x0() {
  return cvec({1.0 - 0.5 * kI, -2.0 + 2.0 * kI, -2.0 + kI, -1.0 + kI, -kI, 1.0 + kI});
}

// -- four-integrator square formation and consensus ----------------------------

inline CVector square_f() { return cvec({1.0, kI, -1.0, -kI}); }

inline EigenSpec square_spec() {
  CMatrix V(4, 4);
  V.col(0) = square_f();
  V.col(1) = cvec({1, 1, 0, 0});
  V.col(2) = cvec({0, 1, 1, 0});
  V.col(3) = cvec({0, 0, 1, 0});
  return make_simple_spec(cvec({0, -1, -2, -3}), V, square_f());
}

/// Closed loop of the square formation (single integrators, so A + BF = F).
inline CMatrix square_closed_loop() {
  return cmat({{-1, 0, 0, kI},
               {1, -2, 0, -2.0 - kI},
               {-1, 1, -3, 1.0 - 2.0 * kI},
               {0, 0, 0, 0}});
}

/// Coupled drift variant that the same eigenstructure decouples.
inline MultiAgentSystem coupled4() {
  RMatrix A(4, 4);
  A << 0, 0.5, 0, 0,
       0, 0, 0, 0,
       -0.5, 0, 0, 0,
       0, 0, 2, 0;
  return make_coupled_system(A, RVector::Ones(4));
}

inline CMatrix coupled4_gain() {
  return cmat({{-1, -0.5, 0, kI},
               {1, -2, 0, -2.0 - kI},
               {-0.5, 1, -3, 1.0 - 2.0 * kI},
               {0, 0, -2, 0}});
}

inline EigenSpec consensus4_spec() {
  CMatrix V(4, 4);
  V.col(0) = CVector::Ones(4);
  V.col(1) = cvec({1, 1, 0, 1});
  V.col(2) = cvec({1, 0, 0, 1});
  V.col(3) = cvec({0, 0, 1, -1});
  return make_simple_spec(cvec({0, -1, -3, -4}), V, CVector::Ones(4));
}

/// Faster variant: lambda_2 = -2 with the compensating fourth eigenvector.
inline EigenSpec consensus4_fast_spec() {
  CMatrix V(4, 4);
  V.col(0) = CVector::Ones(4);
  V.col(1) = cvec({1, 1, 0, 1});
  V.col(2) = cvec({1, 0, 0, 1});
  V.col(3) = cvec({0, 0, 0.5, -1});
  return make_simple_spec(cvec({0, -2, -3, -4}), V, CVector::Ones(4));
}

inline CMatrix consensus4_fast_gain() {
  return cmat({{-4, 1, 2, 1},
               {-1, -2, 2, 1},
               {-2, 0, 0, 2},
               {0, 1, 2, -3}});
}

// -- single-input line plant ---------------------------------------------------

inline MultiAgentSystem simo_line(const RVector& a, const RVector& a_hat, double b1) {
  const Index n = a.size();
  RMatrix A = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) A(i, i) = a(i);
  for (Index i = 1; i < n; ++i) A(i, i - 1) = a_hat(i - 1);
  RVector b(1);
  b(0) = b1;
  return make_tall_system(A, b);
}

/// Printed closed form of the line plant's kernel column: alternating
/// products of the couplings over shifted diagonal entries.
inline CVector simo_kernel_column(const MultiAgentSystem& sys, Complex lambda) {
  const Index n = sys.n();
  CVector n1(n);
  Complex denom = sys.A(0, 0) - lambda;
  n1(0) = sys.B(0, 0) / denom;
  Complex numer = sys.B(0, 0);
  for (Index i = 1; i < n; ++i) {
    numer *= -sys.A(i, i - 1);
    denom *= sys.A(i, i) - lambda;
    n1(i) = numer / denom;
  }
  return n1;
}

}  // namespace fixtures
