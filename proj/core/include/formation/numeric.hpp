#pragma once

#include "formation/errors.hpp"
#include "formation/types.hpp"

namespace formation::numeric {

/// Eigendecomposition summary. Eigenvalues are sorted by descending real
/// part, ties broken by descending imaginary part; eigenvector columns are
/// unit norm. residual = max_i ||M v_i - lambda_i v_i||_2.
struct EigReport {
  CVector eigenvalues;
  CMatrix right_eigenvectors;
  double residual = 0.0;
};

/// Minimum-norm least-squares solution together with ||M x - rhs||_2.
struct LeastSquares {
  CVector solution;
  double residual = 0.0;
};

/// Numerical-rank tolerance: sigma_max * max(rows, cols) * 2^-52.
double default_rank_tolerance(const CMatrix& m, double sigma_max);

/// Solve M X = RHS for square M. Throws SingularMatrixError when M is
/// rank-deficient at the default tolerance.
CMatrix solve(const CMatrix& m, const CMatrix& rhs);
CVector solve(const CMatrix& m, const CVector& rhs);

/// Minimum-norm least-squares solution of M x ~= rhs (rows >= cols).
LeastSquares pinv_solve(const CMatrix& m, const CVector& rhs);

/// Column-wise least-squares solve M X ~= RHS; returns X and the largest
/// per-column residual.
struct LeastSquaresMatrix {
  CMatrix solution;
  double residual = 0.0;
};
LeastSquaresMatrix lstsq(const CMatrix& m, const CMatrix& rhs);

/// Dense eigendecomposition. Throws NoConvergenceError if the QR iteration
/// budget is exhausted. Deterministic for fixed input.
EigReport eig(const CMatrix& m);

/// Numerical rank by singular values above tol (tol = 0 selects the default).
Index rank(const CMatrix& m, double tol = 0.0);

/// Orthonormal basis of the kernel of M (n x k, possibly k = 0).
CMatrix nullspace(const CMatrix& m, double tol = 0.0);

/// 2-norm condition number (sigma_max / sigma_min); +inf for singular input.
double condition_number(const CMatrix& m);

}  // namespace formation::numeric
