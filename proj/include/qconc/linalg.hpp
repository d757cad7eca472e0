#pragma once

// Dense complex matrix kernel: Hermitian eigendecomposition, PSD square
// root, singular values and Takagi factorization of complex symmetric
// matrices. All routines take and return values; nothing is cached.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <numeric>
#include <vector>

#include "qconc/error.hpp"

namespace qconc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace linalg {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
struct HermitianEig {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // columns follow eigenvalue order
};

/// Takagi factorization U * T * U^T = diag(values).
struct Takagi {
  ComplexMatrix unitary;
  RealVector values;  // nonnegative, descending
};

inline double frobenius(const ComplexMatrix& m) { return m.norm(); }

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = kSymmetryTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= rel_tol * std::max(1.0, m.norm());
}

inline bool is_complex_symmetric(const ComplexMatrix& m, double rel_tol = kSymmetryTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).norm() <= rel_tol * std::max(1.0, m.norm());
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline HermitianEig hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  }
  if (!is_hermitian(m)) {
    throw Error(ErrorCode::NotHermitian, "M - M^dagger exceeds relative tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  const auto n = m.rows();
  // Eigen returns ascending values; reorder descending, stable on ties.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const RealVector& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = vals(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Eigenvalues in [-kPsdTol, 0) are treated as exact zeros.
inline double clamp_eigenvalue(double lambda) { return lambda < 0.0 ? 0.0 : lambda; }

/// Eigenvalues at the roundoff floor n * eps * max|lambda| are zeroed too;
/// their square roots would otherwise surface as O(1e-8) noise.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  const auto n = m.rows();
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       (n > 0 ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0);
  RealVector roots(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda < -kPsdTol) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lambda) + " below -1e-10");
    }
    roots(k) = lambda <= floor ? 0.0 : std::sqrt(lambda);
  }
  const ComplexMatrix& v = eig.eigenvectors;
  return hermitian_part(v * roots.asDiagonal() * v.adjoint());
}

/// Singular values, descending.
inline RealVector singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

/// Takagi factorization of a complex symmetric matrix.
///
/// With T = A + iB, the real symmetric matrix [[A, B], [B, -A]] has
/// eigenvalues +-sigma_k. An eigenvector [x; y] for +sigma gives q = x + iy
/// with T * conj(q) = sigma * q, and distinct real eigenvectors map to
/// orthonormal complex ones, so degenerate blocks need no extra work. The
/// zero block is the orthogonal complement of the range of T.
inline Takagi takagi(const ComplexMatrix& t) {
  if (t.rows() != t.cols() || t.rows() < 1) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  }
  if (!is_complex_symmetric(t)) {
    throw Error(ErrorCode::NotSymmetric, "T - T^T exceeds relative tolerance");
  }
  const Eigen::Index n = t.rows();
  const ComplexMatrix sym = 0.5 * (t + t.transpose());
  RealMatrix embed(2 * n, 2 * n);
  embed.topLeftCorner(n, n) = sym.real();
  embed.topRightCorner(n, n) = sym.imag();
  embed.bottomLeftCorner(n, n) = sym.imag();
  embed.bottomRightCorner(n, n) = -sym.real();

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(embed);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Takagi embedding eigensolver did not converge");
  }
  const RealVector& vals = solver.eigenvalues();  // ascending
  const double top = std::max(vals(2 * n - 1), 0.0);
  const double zero_tol = 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, top);

  ComplexMatrix q(n, n);
  RealVector values = RealVector::Zero(n);
  Eigen::Index filled = 0;
  for (Eigen::Index k = 2 * n - 1; k >= 0 && filled < n; --k) {
    if (vals(k) <= zero_tol) break;
    const auto col = solver.eigenvectors().col(k);
    for (Eigen::Index i = 0; i < n; ++i) q(i, filled) = Complex(col(i), col(n + i));
    q.col(filled).normalize();
    values(filled) = vals(k);
    ++filled;
  }
  if (filled < n) {
    if (filled == 0) {
      q = ComplexMatrix::Identity(n, n);
    } else {
      Eigen::HouseholderQR<ComplexMatrix> qr(q.leftCols(filled));
      const ComplexMatrix full = qr.householderQ();
      q.rightCols(n - filled) = full.rightCols(n - filled);
    }
  }
  return Takagi{q.adjoint(), values};
}

}  // namespace linalg
}  // namespace qconc
