#pragma once

// Mixed states on C^N (x) C^N: the S^{ipjq} index matrices, their
// Lambda-spectra, the generalized-concurrence lower bound and its
// entanglement-of-formation counterpart, the 3x3 example class and PPT.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qconc/purestate.hpp"
#include "qconc/spectra.hpp"

namespace qconc {

class DensityMatrix {
 public:
  static DensityMatrix validate(const ComplexMatrix& m, Eigen::Index n, double tol = 1e-10) {
    if (n < 2 || m.rows() != n * n || m.cols() != n * n) {
      throw Error(ErrorCode::BadShape, "density matrix must be N^2 x N^2 with N >= 2");
    }
    if (!linalg::is_hermitian(m, tol)) throw Error(ErrorCode::NotHermitian, "rho is not Hermitian");
    const double trace = m.trace().real();
    if (std::abs(trace - 1.0) > tol) {
      throw Error(ErrorCode::BadTrace, "trace " + std::to_string(trace) + " differs from 1");
    }
    const ComplexMatrix herm = linalg::hermitian_part(m);
    const double min_eig = linalg::hermitian_eig(herm).eigenvalues(n * n - 1);
    if (min_eig < -tol) {
      throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(min_eig));
    }
    return DensityMatrix(herm, n);
  }

  static DensityMatrix pure(const PureState& psi) {
    const ComplexVector v = psi.vector();
    return DensityMatrix(v * v.adjoint(), psi.dim());
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// (U (x) V) rho (U (x) V)^dagger.
  [[nodiscard]] DensityMatrix local_unitary(const ComplexMatrix& u, const ComplexMatrix& v) const {
    const ComplexMatrix w = linalg::kron(u, v);
    return DensityMatrix(linalg::hermitian_part(w * matrix_ * w.adjoint()), dim_);
  }

 private:
  DensityMatrix(ComplexMatrix m, Eigen::Index n) : matrix_(std::move(m)), dim_(n) {}
  ComplexMatrix matrix_;
  Eigen::Index dim_;
};

struct DecompositionMember {
  double weight = 0.0;
  PureState state;
};

/// Weighted pure-state ensemble sum_a p_a |psi_a><psi_a|.
struct Decomposition {
  std::vector<DecompositionMember> members;

  [[nodiscard]] std::size_t size() const noexcept { return members.size(); }

  [[nodiscard]] double total_weight() const {
    double s = 0.0;
    for (const auto& mem : members) s += mem.weight;
    return s;
  }

  [[nodiscard]] ComplexMatrix reconstruct() const {
    const Eigen::Index n = members.front().state.dim();
    ComplexMatrix rho = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& mem : members) {
      const ComplexVector v = mem.state.vector();
      rho += mem.weight * v * v.adjoint();
    }
    return rho;
  }
};

/// Canonical index quadruple (i, p, j, q), 0-based, with i < j and p < q.
class SIndex {
 public:
  /// Canonicalizes any ordered quadruple with i != j and p != q. The
  /// returned sign is the factor relating the raw matrix to the canonical one.
  static std::pair<SIndex, int> canonical(int i, int p, int j, int q) {
    if (i == j || p == q || std::min({i, p, j, q}) < 0) {
      throw Error(ErrorCode::BadIndex, "S-index needs i != j and p != q");
    }
    int sign = 1;
    if (i > j) {
      std::swap(i, j);
      std::swap(p, q);
    }
    if (p > q) {
      std::swap(p, q);
      sign = -1;
    }
    return {SIndex(i, p, j, q), sign};
  }

  static SIndex make(int i, int p, int j, int q) {
    if (!(i < j && p < q) || std::min(i, p) < 0) {
      throw Error(ErrorCode::BadIndex, "canonical S-index requires i < j and p < q");
    }
    return SIndex(i, p, j, q);
  }

  /// All canonical indices for dimension n, in lexicographic (i, j, p, q) order.
  static std::vector<SIndex> all(Eigen::Index n) {
    std::vector<SIndex> out;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int p = 0; p < n; ++p)
          for (int q = p + 1; q < n; ++q) out.push_back(SIndex(i, p, j, q));
    return out;
  }

  [[nodiscard]] int i() const noexcept { return i_; }
  [[nodiscard]] int p() const noexcept { return p_; }
  [[nodiscard]] int j() const noexcept { return j_; }
  [[nodiscard]] int q() const noexcept { return q_; }

  friend bool operator==(const SIndex&, const SIndex&) = default;

 private:
  SIndex(int i, int p, int j, int q) : i_(i), p_(p), j_(j), q_(q) {}
  int i_, p_, j_, q_;
};

/// Top four singular values of sqrt(rho) S conj(sqrt(rho)), descending.
using LambdaSpectrum = std::array<double, 4>;

/// S^{ipjq} for an ordered quadruple (0-based), without canonicalization.
inline RealMatrix s_matrix_raw(int i, int p, int j, int q, Eigen::Index n) {
  if (i == j || p == q || std::max({i, p, j, q}) >= n || std::min({i, p, j, q}) < 0) {
    throw Error(ErrorCode::BadIndex, "S-index out of range or degenerate");
  }
  RealMatrix s = RealMatrix::Zero(n * n, n * n);
  const auto at = [n](int row, int col) { return n * row + col; };
  s(at(i, p), at(j, q)) = 1.0;
  s(at(j, q), at(i, p)) = 1.0;
  s(at(i, q), at(j, p)) = -1.0;
  s(at(j, p), at(i, q)) = -1.0;
  return s;
}

inline RealMatrix s_matrix(const SIndex& idx, Eigen::Index n) {
  return s_matrix_raw(idx.i(), idx.p(), idx.j(), idx.q(), n);
}

/// |<psi|S psi*>|, evaluated through the matrix.
inline double d_ipjq_matrix_form(const PureState& psi, const SIndex& idx) {
  const ComplexVector v = psi.vector();
  const RealMatrix s = s_matrix(idx, psi.dim());
  return std::abs(v.dot(s * v.conjugate()));
}

/// 2 |a_ip a_jq - a_iq a_jp|.
inline double d_ipjq_pure(const PureState& psi, const SIndex& idx) {
  const ComplexMatrix& a = psi.coeffs();
  return 2.0 * std::abs(a(idx.i(), idx.p()) * a(idx.j(), idx.q()) -
                        a(idx.i(), idx.q()) * a(idx.j(), idx.p()));
}

/// Eigenvectors of rho scaled so <v_k|v_k> is the k-th nonzero eigenvalue.
inline std::vector<ComplexVector> eigen_vectors_subnormalized(const DensityMatrix& rho,
                                                              double zero_tol = 1e-12) {
  const auto eig = linalg::hermitian_eig(rho.matrix());
  std::vector<ComplexVector> out;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda <= zero_tol) break;
    out.emplace_back(std::sqrt(lambda) * eig.eigenvectors.col(k));
  }
  return out;
}

inline Eigen::Index rank(const DensityMatrix& rho, double zero_tol = 1e-12) {
  return static_cast<Eigen::Index>(eigen_vectors_subnormalized(rho, zero_tol).size());
}

inline constexpr double kRankViolation = 1e-8;

/// Lambda-spectrum from a precomputed sqrt(rho).
inline LambdaSpectrum lambda_spectrum_from_sqrt(const ComplexMatrix& sqrt_rho, const SIndex& idx,
                                                Eigen::Index n) {
  const RealMatrix s = s_matrix(idx, n);
  const ComplexMatrix x = sqrt_rho * s * sqrt_rho.conjugate();
  const RealVector sv = linalg::singular_values(x);
  if (sv.size() > 4 && sv(4) >= kRankViolation) {
    throw Error(ErrorCode::RankViolation,
                "fifth singular value " + std::to_string(sv(4)) + " of sqrt(rho) S sqrt(rho)*");
  }
  LambdaSpectrum out{0.0, 0.0, 0.0, 0.0};
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(4, sv.size()); ++k) out[k] = sv(k);
  return out;
}

inline LambdaSpectrum lambda_spectrum(const DensityMatrix& rho, const SIndex& idx) {
  return lambda_spectrum_from_sqrt(linalg::sqrt_psd(rho.matrix()), idx, rho.dim());
}

/// All singular values of sqrt(rho) S conj(sqrt(rho)), for rank diagnostics.
inline RealVector lambda_singular_values(const DensityMatrix& rho, const SIndex& idx) {
  const ComplexMatrix r = linalg::sqrt_psd(rho.matrix());
  return linalg::singular_values(r * s_matrix(idx, rho.dim()) * r.conjugate());
}

/// tau_kl = <v_k| S v_l*> over the subnormalized eigenvectors.
inline ComplexMatrix tau_matrix(const std::vector<ComplexVector>& vectors, const SIndex& idx,
                                Eigen::Index n) {
  const RealMatrix s = s_matrix(idx, n);
  const auto r = static_cast<Eigen::Index>(vectors.size());
  ComplexMatrix tau(r, r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = 0; l < r; ++l)
      tau(k, l) = vectors[k].dot(s * vectors[l].conjugate());
  return 0.5 * (tau + tau.transpose());
}

inline ComplexMatrix tau_matrix(const DensityMatrix& rho, const SIndex& idx) {
  return tau_matrix(eigen_vectors_subnormalized(rho), idx, rho.dim());
}

/// |w_k> = sum_l conj(U_kl) |v_l>, split into weights and normalized states.
/// Members with norm^2 below 1e-14 are dropped and weights renormalized.
inline Decomposition decomposition_from_vectors(const std::vector<ComplexVector>& vectors,
                                                const ComplexMatrix& u) {
  Decomposition out;
  const Eigen::Index r = static_cast<Eigen::Index>(vectors.size());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    ComplexVector w = ComplexVector::Zero(vectors.front().size());
    for (Eigen::Index l = 0; l < r; ++l) w += std::conj(u(k, l)) * vectors[l];
    const double weight = w.squaredNorm();
    if (weight < 1e-14) continue;
    out.members.push_back({weight, PureState::from_vector(w / std::sqrt(weight), 1e-8, true)});
  }
  const double total = out.total_weight();
  for (auto& mem : out.members) mem.weight /= total;
  return out;
}

/// Decomposition in which <w_k|S w_l*> = Lambda_k delta_kl.
///
/// The subnormalized states are kept alongside so the diagonal form can be
/// checked without renormalization artefacts.
struct IndexDecomposition {
  Decomposition decomposition;
  std::vector<ComplexVector> states;  // |w_k>, subnormalized
  RealVector lambdas;                 // Takagi values of tau, descending
};

inline IndexDecomposition optimal_index_decomposition(const DensityMatrix& rho, const SIndex& idx) {
  const auto vectors = eigen_vectors_subnormalized(rho);
  const ComplexMatrix tau = tau_matrix(vectors, idx, rho.dim());
  const auto tk = linalg::takagi(tau);
  IndexDecomposition out;
  const auto r = static_cast<Eigen::Index>(vectors.size());
  for (Eigen::Index k = 0; k < r; ++k) {
    ComplexVector w = ComplexVector::Zero(vectors.front().size());
    for (Eigen::Index l = 0; l < r; ++l) w += std::conj(tk.unitary(k, l)) * vectors[l];
    out.states.push_back(w);
  }
  out.decomposition = decomposition_from_vectors(vectors, tk.unitary);
  out.lambdas = tk.values;
  return out;
}

/// Lambda_1 - Lambda_2 - Lambda_3 - Lambda_4.
inline double lambda_difference(const LambdaSpectrum& l) { return l[0] - l[1] - l[2] - l[3]; }

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// Per-index terms of the lower bound, canonical order.
struct BoundTerm {
  SIndex index;
  LambdaSpectrum lambdas;
  double difference;
};

inline std::vector<BoundTerm> bound_terms(const DensityMatrix& rho) {
  const ComplexMatrix root = linalg::sqrt_psd(rho.matrix());
  std::vector<BoundTerm> out;
  for (const SIndex& idx : SIndex::all(rho.dim())) {
    const auto l = lambda_spectrum_from_sqrt(root, idx, rho.dim());
    out.push_back({idx, l, lambda_difference(l)});
  }
  return out;
}

/// (mn/4) [sum over all ordered (i,p,j,q) of (Lambda_1 - ... - Lambda_4)^2]^(1/2).
///
/// Every canonical index stands for four ordered quadruples with the same
/// spectrum; degenerate quadruples have S = 0. With clamp set, negative
/// differences count as zero.
inline double d_lower_bound(const DensityMatrix& rho, int m, int n, bool clamp = true) {
  detail::CompensatedSum sum;
  for (const auto& term : bound_terms(rho)) {
    const double delta = clamp ? std::max(0.0, term.difference) : term.difference;
    sum.add(4.0 * delta * delta);
  }
  return static_cast<double>(m) * n / 4.0 * std::sqrt(sum.value());
}

/// E(D(rho)) for the supported eigenvalue families: n = 2 (two eigenvalues of
/// multiplicity m) and n = 3 (arithmetic progression, multiplicity m).
inline double eof_from_concurrence_bound(double bound, int m, int n) {
  if (bound <= 0.0) return 0.0;
  if (n == 2) {
    if (bound > 1.0 + 1e-9) {
      throw Error(ErrorCode::OutOfRange, "bound " + std::to_string(bound) + " exceeds 1");
    }
    return spectra::eof_of_d(std::min(bound, 1.0), m);
  }
  if (n == 3) {
    const double v = spectra::arith3_v_from_concurrence(bound, m);
    const double c = 1.0 / (3.0 * m);
    const std::array<double, 3> values{c - v, c, c + v};
    return spectra::eof_from_spectrum(values, m);
  }
  throw Error(ErrorCode::UnsupportedFamily, "entanglement bound supports n = 2 or n = 3 only");
}

inline double eof_lower_bound(const DensityMatrix& rho, int m, int n) {
  if (n != 2 && n != 3) {
    throw Error(ErrorCode::UnsupportedFamily, "entanglement bound supports n = 2 or n = 3 only");
  }
  return eof_from_concurrence_bound(d_lower_bound(rho, m, n, true), m, n);
}

struct PptResult {
  bool is_ppt = true;
  double min_eigenvalue = 0.0;
};

/// Partial transpose on the second factor.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, Eigen::Index n) {
  ComplexMatrix out(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index q = 0; q < n; ++q) out(n * i + p, n * j + q) = m(n * i + q, n * j + p);
  return out;
}

inline PptResult ppt_check(const DensityMatrix& rho) {
  const auto eig = linalg::hermitian_eig(partial_transpose(rho.matrix(), rho.dim()));
  const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  return {min_eig >= -1e-10, min_eig};
}

/// True iff every support vector of rho, read as a coefficient matrix, has
/// its second and third rows equal.
inline bool form_a_check(const DensityMatrix& rho, double tol = 1e-8) {
  if (rho.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "form-(a) class needs N = 3");
  const auto eig = linalg::hermitian_eig(rho.matrix());
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (eig.eigenvalues(k) <= 1e-12) break;
    const ComplexVector& v = eig.eigenvectors.col(k);
    if ((v.segment(3, 3) - v.segment(6, 3)).norm() > tol) return false;
  }
  return true;
}

/// sqrt(2) [(dL^{1122})^2 + (dL^{1123})^2 + (dL^{1223})^2]^(1/2) on the
/// form-(a) class (indices written 1-based as i p j q).
inline double example_3x3_bound(const DensityMatrix& rho, bool clamp = true) {
  if (!form_a_check(rho)) throw Error(ErrorCode::NotFormA, "rho is not supported on form-(a) states");
  const ComplexMatrix root = linalg::sqrt_psd(rho.matrix());
  const std::array<SIndex, 3> indices{SIndex::make(0, 0, 1, 1), SIndex::make(0, 0, 1, 2),
                                      SIndex::make(0, 1, 1, 2)};
  double sum = 0.0;
  for (const auto& idx : indices) {
    const double delta = lambda_difference(lambda_spectrum_from_sqrt(root, idx, 3));
    const double d = clamp ? std::max(0.0, delta) : delta;
    sum += d * d;
  }
  return std::numbers::sqrt2 * std::sqrt(sum);
}

}  // namespace qconc
