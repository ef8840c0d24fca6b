#include "formation/numeric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace formation::numeric {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::JacobiSVD<CMatrix> svd_thin(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

double default_rank_tolerance(const CMatrix& m, double sigma_max) {
  return sigma_max * static_cast<double>(std::max(m.rows(), m.cols())) * kEps;
}

CMatrix solve(const CMatrix& m, const CMatrix& rhs) {
  if (m.rows() != m.cols()) {
    throw SingularMatrixError("solve: matrix must be square");
  }
  if (rhs.rows() != m.rows()) {
    throw SingularMatrixError("solve: dimension mismatch between matrix and right-hand side");
  }
  Eigen::FullPivLU<CMatrix> lu(m);
  lu.setThreshold(static_cast<double>(std::max(m.rows(), m.cols())) * kEps);
  if (lu.rank() < m.rows()) {
    throw SingularMatrixError("solve: matrix is rank-deficient at tolerance (rank " +
                              std::to_string(lu.rank()) + " of " + std::to_string(m.rows()) + ")");
  }
  return lu.solve(rhs);
}

CVector solve(const CMatrix& m, const CVector& rhs) {
  CMatrix x = solve(m, CMatrix(rhs));
  return CVector(x.col(0));
}

LeastSquares pinv_solve(const CMatrix& m, const CVector& rhs) {
  auto svd = svd_thin(m);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() == 0 ? 0.0 : default_rank_tolerance(m, sv(0));
  // x = V * Sigma^+ * U^H * rhs, truncating singular values below tol.
  CVector y = svd.matrixU().adjoint() * rhs;
  for (Index i = 0; i < sv.size(); ++i) {
    y(i) = sv(i) > tol ? y(i) / sv(i) : Complex(0.0, 0.0);
  }
  LeastSquares out;
  out.solution = svd.matrixV() * y;
  out.residual = (m * out.solution - rhs).norm();
  return out;
}

LeastSquaresMatrix lstsq(const CMatrix& m, const CMatrix& rhs) {
  auto svd = svd_thin(m);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() == 0 ? 0.0 : default_rank_tolerance(m, sv(0));
  CMatrix y = svd.matrixU().adjoint() * rhs;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) {
      y.row(i) /= sv(i);
    } else {
      y.row(i).setZero();
    }
  }
  LeastSquaresMatrix out;
  out.solution = svd.matrixV() * y;
  out.residual = 0.0;
  CMatrix r = m * out.solution - rhs;
  for (Index j = 0; j < r.cols(); ++j) {
    out.residual = std::max(out.residual, r.col(j).norm());
  }
  return out;
}

EigReport eig(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw NoConvergenceError("eig: matrix must be square");
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NoConvergenceError("eig: QR iteration did not converge");
  }

  const Index n = m.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const CVector& values = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  });

  EigReport report;
  report.eigenvalues.resize(n);
  report.right_eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    report.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    CVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    const double nrm = v.norm();
    if (nrm > 0.0) v /= nrm;
    report.right_eigenvectors.col(k) = v;
  }
  report.residual = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double r =
        (m * report.right_eigenvectors.col(k) - report.eigenvalues(k) * report.right_eigenvectors.col(k))
            .norm();
    report.residual = std::max(report.residual, r);
  }
  return report;
}

Index rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double threshold = tol > 0.0 ? tol : default_rank_tolerance(m, sv(0));
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  return r;
}

CMatrix nullspace(const CMatrix& m, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold =
      (tol > 0.0 || sv.size() == 0) ? tol : default_rank_tolerance(m, sv(0));
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0.0;
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace formation::numeric
