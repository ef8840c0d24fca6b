#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "formation/model.hpp"

namespace ftest {

using formation::CMatrix;
using formation::Complex;
using formation::CVector;
using formation::Index;
using formation::RVector;

inline constexpr Complex kI{0.0, 1.0};

/// Deterministic uniform doubles independent of libstdc++ distribution
/// internals.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  double nonzero(double lo, double hi) {
    const double mag = uniform(lo, hi);
    return uniform() < 0.5 ? -mag : mag;
  }

  Complex complex_box(double r = 2.0) { return {uniform(-r, r), uniform(-r, r)}; }

  Complex unit_phase() { return std::polar(1.0, uniform(0.0, 2.0 * 3.14159265358979)); }
};

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline CMatrix cmat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  CMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const auto& z : row) m(i, j++) = z;
    ++i;
  }
  return m;
}

inline CVector cvec(std::initializer_list<Complex> entries) {
  CVector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const auto& z : entries) v(i++) = z;
  return v;
}

inline RVector rvec(std::initializer_list<double> entries) {
  RVector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const auto& x : entries) v(i++) = x;
  return v;
}

}  // namespace ftest
