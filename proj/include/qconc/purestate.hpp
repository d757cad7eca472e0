#pragma once

// Pure bipartite states on C^N (x) C^N and their single-state measures.
//
// A state is stored through its N x N coefficient matrix A, with
// |psi> = sum_ij a_ij e_i (x) e_j. The state vector is the row-major
// flattening of A: component N*i + p holds a_ip (0-based).

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qconc/linalg.hpp"

namespace qconc {

class PureState {
 public:
  /// Validates normalization; with renormalize set, scales to unit norm.
  static PureState from_coefficients(const ComplexMatrix& a, double tol = 1e-10,
                                     bool renormalize = false) {
    if (a.rows() != a.cols() || a.rows() < 2) {
      throw Error(ErrorCode::DimensionMismatch, "coefficient matrix must be N x N with N >= 2");
    }
    const double norm = a.norm();
    if (norm < 1e-12) throw Error(ErrorCode::ZeroState, "coefficient matrix has zero norm");
    if (renormalize) return PureState(a / norm);
    if (std::abs(norm * norm - 1.0) > tol) {
      throw Error(ErrorCode::NotNormalized,
                  "sum |a_ij|^2 = " + std::to_string(norm * norm) + " differs from 1");
    }
    return PureState(a);
  }

  /// Builds a state from its row-major state vector of length N^2.
  static PureState from_vector(const ComplexVector& psi, double tol = 1e-10,
                               bool renormalize = false) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(psi.size()))));
    if (n * n != psi.size()) {
      throw Error(ErrorCode::DimensionMismatch, "state vector length is not a perfect square");
    }
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index p = 0; p < n; ++p) a(i, p) = psi(n * i + p);
    return from_coefficients(a, tol, renormalize);
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return coeffs_.rows(); }
  [[nodiscard]] const ComplexMatrix& coeffs() const noexcept { return coeffs_; }

  [[nodiscard]] ComplexVector vector() const {
    const Eigen::Index n = dim();
    ComplexVector psi(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index p = 0; p < n; ++p) psi(n * i + p) = coeffs_(i, p);
    return psi;
  }

  /// (U (x) V)|psi>, i.e. A -> U A V^T.
  [[nodiscard]] PureState local_unitary(const ComplexMatrix& u, const ComplexMatrix& v) const {
    return PureState(u * coeffs_ * v.transpose());
  }

 private:
  explicit PureState(ComplexMatrix a) : coeffs_(std::move(a)) {}
  ComplexMatrix coeffs_;
};

/// n distinct nonzero eigenvalues of AA^dagger, each m-fold degenerate.
struct SpectrumProfile {
  int n = 0;
  int m = 0;
  std::vector<double> values;  // descending
};

struct LocalInvariants {
  double i0 = 0.0;
  double i1 = 0.0;
};

/// Raw D together with the flag for the regime where D lies in [0, 1].
struct GeneralizedConcurrence {
  double value = 0.0;
  bool in_range = true;
};

namespace detail {

inline double entropy_bits(const RealVector& spectrum) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    const double lambda = linalg::clamp_eigenvalue(spectrum(k));
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return h;
}

}  // namespace detail

/// rho_1 = A A^dagger.
inline ComplexMatrix reduced_density(const PureState& psi) {
  const ComplexMatrix& a = psi.coeffs();
  return linalg::hermitian_part(a * a.adjoint());
}

/// Descending eigenvalues of A A^dagger, tiny negatives clamped.
inline RealVector schmidt_spectrum(const PureState& psi) {
  RealVector values = linalg::hermitian_eig(reduced_density(psi)).eigenvalues;
  for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = linalg::clamp_eigenvalue(values(k));
  return values;
}

inline double eof_pure(const PureState& psi) { return detail::entropy_bits(schmidt_spectrum(psi)); }

inline double concurrence_c2(const PureState& psi) {
  if (psi.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "C2 requires N = 2");
  const ComplexMatrix& a = psi.coeffs();
  return 2.0 * std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
}

inline LocalInvariants local_invariants(const PureState& psi) {
  const ComplexMatrix rho1 = reduced_density(psi);
  return {rho1.trace().real(), rho1.squaredNorm()};
}

inline double concurrence_cn(const PureState& psi) {
  const auto [i0, i1] = local_invariants(psi);
  const double n = static_cast<double>(psi.dim());
  const double radicand = n / (n - 1.0) * (i0 * i0 - i1);
  if (radicand < -1e-12) {
    throw Error(ErrorCode::NumericalInconsistency,
                "negative radicand " + std::to_string(radicand) + " in C_N");
  }
  return std::sqrt(std::max(radicand, 0.0));
}

/// Sum over all ordered (i, j, p, q) of |a_ip a_jq - a_iq a_jp|^2.
inline double sum_squared_minors(const PureState& psi) {
  const ComplexMatrix& a = psi.coeffs();
  const Eigen::Index n = psi.dim();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q)
          total += std::norm(a(i, p) * a(j, q) - a(i, q) * a(j, p));
  return total;
}

/// Groups the nonzero eigenvalues of AA^dagger into n clusters of m.
///
/// Eigenvalues below tol count as zero. Exactly m*n must be nonzero; each
/// consecutive group of m must agree within relative gap tol. Groups are
/// allowed to coincide with each other.
inline SpectrumProfile spectrum_profile(const PureState& psi, int m, int n, double tol = 1e-8) {
  if (m < 1 || n < 1 || static_cast<Eigen::Index>(m) * n > psi.dim()) {
    throw Error(ErrorCode::ProfileMismatch, "need m, n >= 1 and m*n <= N");
  }
  const RealVector spectrum = schmidt_spectrum(psi);
  Eigen::Index nonzero = 0;
  while (nonzero < spectrum.size() && spectrum(nonzero) >= tol) ++nonzero;

  auto describe = [&] {
    std::ostringstream os;
    os.precision(12);
    os << "eigenvalues of AA^dagger:";
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) os << ' ' << spectrum(k);
    os << " (" << nonzero << " nonzero; requested m=" << m << ", n=" << n << ')';
    return os.str();
  };

  if (nonzero != static_cast<Eigen::Index>(m) * n) {
    throw Error(ErrorCode::ProfileMismatch, describe());
  }
  SpectrumProfile profile{n, m, {}};
  for (int g = 0; g < n; ++g) {
    const double hi = spectrum(static_cast<Eigen::Index>(g) * m);
    const double lo = spectrum(static_cast<Eigen::Index>(g) * m + m - 1);
    if (hi - lo > tol * hi) throw Error(ErrorCode::ProfileMismatch, describe());
    double mean = 0.0;
    for (int k = 0; k < m; ++k) mean += spectrum(static_cast<Eigen::Index>(g) * m + k);
    profile.values.push_back(mean / m);
  }
  return profile;
}

/// D = m n sqrt(lambda_1 ... lambda_n).
inline GeneralizedConcurrence generalized_concurrence_D(const PureState& psi, int m, int n,
                                                        double tol = 1e-8) {
  const SpectrumProfile profile = spectrum_profile(psi, m, n, tol);
  double product = 1.0;
  for (double lambda : profile.values) product *= lambda;
  const double d = static_cast<double>(m) * n * std::sqrt(product);
  return {d, d >= 0.0 && d <= 1.0 + 1e-12};
}

/// Condition iii of the class Psi: D == (mn / sqrt 2) sqrt(I0^2 - I1).
inline bool psi_condition_iii(const PureState& psi, int m, int n, double tol = 1e-8) {
  const double d = generalized_concurrence_D(psi, m, n).value;
  const auto [i0, i1] = local_invariants(psi);
  const double rhs = static_cast<double>(m) * n / std::numbers::sqrt2 *
                     std::sqrt(std::max(i0 * i0 - i1, 0.0));
  return std::abs(d - rhs) <= tol;
}

}  // namespace qconc
