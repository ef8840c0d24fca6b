#include <doctest.h>

#include "formation/assign.hpp"
#include "formation/motion.hpp"
#include "formation/topology.hpp"
#include "reference_fixtures.hpp"
#include "test_util.hpp"

using namespace formation;
using ftest::cvec;
using ftest::kI;
using ftest::rvec;

TEST_SUITE_BEGIN("model");

TEST_CASE("system factories enforce structure") {
  CHECK_THROWS_AS(make_diagonal_system(rvec({1.0}), rvec({0.0})), std::invalid_argument);
  CHECK_THROWS_AS(make_tall_system(RMatrix::Identity(2, 2), rvec({1.0, 1.0})),
                  std::invalid_argument);
  const auto sys = fixtures::hetero5();
  CHECK(sys.shape == SystemShape::DiagonalBoth);
  CHECK(sys.n() == 5);
  CHECK(sys.m() == 5);
  CHECK(fixtures::coupled4().shape == SystemShape::GeneralA_DiagonalB);
  CHECK(fixtures::simo_line(rvec({1, 1}), rvec({1}), 1.0).shape == SystemShape::GeneralA_TallB);
}

TEST_CASE("validate_spec: pentagon spec is valid") {
  const auto report =
      validate_spec(fixtures::hetero5(), fixtures::pentagon_spec(), SpecKind::scalable());
  CHECK(report.ok());
  CHECK_FALSE(report.self_conjugate);
}

TEST_CASE("validate_spec: positive real part rejected") {
  auto spec = fixtures::pentagon_spec();
  spec.blocks[1].eigenvalue = Complex(1.0, 0.0);
  const auto report = validate_spec(fixtures::hetero5(), spec, SpecKind::scalable());
  CHECK_FALSE(report.ok());
}

TEST_CASE("validate_spec: dependent eigenvectors rejected") {
  auto spec = fixtures::pentagon_spec();
  spec.blocks[2].chain[0] = spec.blocks[1].chain[0];
  const auto report = validate_spec(fixtures::hetero5(), spec, SpecKind::scalable());
  CHECK_FALSE(report.ok());
}

TEST_CASE("validate_spec: rigid and circular shapes") {
  const auto sys = fixtures::hetero5();
  CHECK(validate_spec(sys, fixtures::rigid_pentagon_spec(), SpecKind::rigid(5.0)).ok());
  // Same spec fails under the scalable kind (two zero eigenvalues).
  CHECK_FALSE(validate_spec(sys, fixtures::rigid_pentagon_spec(), SpecKind::scalable()).ok());
  CHECK(validate_spec(fixtures::encircle6(), fixtures::encircle_spec(), SpecKind::circular(1.0)).ok());
}

TEST_CASE("is_self_conjugate") {
  // All-real spec.
  CHECK(is_self_conjugate(fixtures::consensus5_spec()));
  // The encircling spec has an unpaired eigenvalue j.
  CHECK_FALSE(is_self_conjugate(fixtures::encircle_spec()));

  // Conjugate pair with conjugate eigenvectors: self-conjugate, and the
  // resulting gain matrix is real.
  const auto sys = fixtures::integrators(3);
  CMatrix v(3, 3);
  v.col(0) = CVector::Ones(3);
  v.col(1) = cvec({1.0 + kI, -kI, 0.5 - 0.5 * kI});
  v.col(2) = cvec({1.0 - kI, kI, 0.5 + 0.5 * kI});
  const auto spec =
      make_simple_spec(cvec({0.0, -1.0 + kI, -1.0 - kI}), v, CVector::Ones(3));
  CHECK(is_self_conjugate(spec));
  const auto res = synthesize(sys, spec, SpecKind::scalable());
  CHECK(res.F.imag().cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, max_abs(res.F)));
}

TEST_CASE("is_controllable") {
  CHECK(is_controllable(fixtures::hetero5()));
  // Repeated mode with a single input column touching one state.
  RMatrix a(2, 2);
  a << 1.0, 0.0, 0.0, 1.0;
  CHECK_FALSE(is_controllable(make_tall_system(a, rvec({1.0}))));
  // The line plant with nonzero couplings is controllable.
  CHECK(is_controllable(fixtures::simo_line(rvec({1.0, -0.5, 2.0}), rvec({0.7, -1.2}), 1.5)));
}

TEST_CASE("generator/validator round trip") {
  ftest::Rng rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.uniform(0, 4));
    RVector a(n), b(n);
    CVector f(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(-2.0, 2.0);
      b(i) = rng.nonzero(0.5, 2.0);
      f(i) = rng.unit_phase();
    }
    const auto sys = make_diagonal_system(a, b);
    CVector lambdas(n - 1);
    for (Index i = 0; i < n - 1; ++i) lambdas(i) = Complex(-1.0 - static_cast<double>(i), 0.0);

    CHECK(validate_spec(sys, star_spec(sys, f, lambdas), SpecKind::scalable()).ok());
    CHECK(validate_spec(sys, cyclic_spec(sys, f), SpecKind::scalable()).ok());
    CHECK(validate_spec(sys, line_spec(sys, f), SpecKind::scalable()).ok());
    if (n >= 3) {
      CVector stub(n - 2);
      for (Index i = 0; i < n - 2; ++i) stub(i) = lambdas(i);
      CHECK(validate_spec(sys, rigid_spec(sys, f, stub), SpecKind::rigid(2.0)).ok());
      CHECK(validate_spec(sys, circular_spec(sys, f, 1.0, stub), SpecKind::circular(1.0)).ok());
    }
  }
}

TEST_CASE("defective zero eigenvalue is rejected") {
  const auto sys = fixtures::integrators(2);
  EigenSpec spec;
  spec.formation = CVector::Ones(2);
  spec.blocks.push_back(
      JordanBlock{Complex(0.0, 0.0), {CVector::Ones(2), cvec({1.0, 0.0})}});
  CHECK_FALSE(validate_spec(sys, spec, SpecKind::scalable()).ok());
}

TEST_SUITE_END();
