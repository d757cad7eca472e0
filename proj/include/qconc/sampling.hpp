#pragma once

// Reproducible random states.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Uniform variates take the top 53 bits, normals come from
// Box-Muller; the std distributions are avoided because their algorithms
// are implementation-defined. Per-item seeds are derived with SplitMix64.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qconc/mixed.hpp"

namespace qconc::sampling {

/// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the k-th item of a batch derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(splitmix64(seed) ^ (k * 0xD1B54A32D192ED03ULL + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
    return g;
  }

  /// Symmetric Dirichlet(1) weights.
  std::vector<double> dirichlet(std::size_t count) {
    std::vector<double> w(count);
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(uniform_open());
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal
/// moved into Q.
inline ComplexMatrix haar_unitary(Rng& rng, Eigen::Index n) {
  const ComplexMatrix g = rng.ginibre(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0, 0.0);
    q.col(k) *= phase;
  }
  return q;
}

inline ComplexMatrix haar_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(rng, n);
}

inline PureState random_pure(Rng& rng, Eigen::Index n) {
  return PureState::from_coefficients(rng.ginibre(n, n), 1e-10, true);
}

inline PureState random_pure(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(rng, n);
}

/// N = 3 state whose coefficient matrix has identical second and third rows.
inline PureState random_form_a_state(Rng& rng) {
  const ComplexMatrix rows = rng.ginibre(2, 3);
  ComplexMatrix a(3, 3);
  a.row(0) = rows.row(0);
  a.row(1) = rows.row(1);
  a.row(2) = rows.row(1);
  return PureState::from_coefficients(a, 1e-10, true);
}

inline PureState random_form_a_state(std::uint64_t seed) {
  Rng rng(seed);
  return random_form_a_state(rng);
}

namespace detail {

inline DensityMatrix mix(const std::vector<PureState>& states, const std::vector<double>& weights) {
  const Eigen::Index n = states.front().dim();
  ComplexMatrix rho = ComplexMatrix::Zero(n * n, n * n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const ComplexVector v = states[k].vector();
    rho += weights[k] * v * v.adjoint();
  }
  return DensityMatrix::validate(rho / rho.trace().real(), n);
}

}  // namespace detail

/// Dirichlet(1) mixture of `rank` form-(a) states.
inline DensityMatrix random_form_a_mixture(int rank, std::uint64_t seed) {
  if (rank < 1 || rank > 6) throw Error(ErrorCode::BadRank, "form-(a) mixtures have rank 1..6");
  Rng rng(seed);
  std::vector<PureState> states;
  for (int k = 0; k < rank; ++k) states.push_back(random_form_a_state(rng));
  return detail::mix(states, rng.dirichlet(static_cast<std::size_t>(rank)));
}

/// Dirichlet(1) mixture of `rank` Haar-random pure states on C^n (x) C^n.
inline DensityMatrix random_density(Eigen::Index n, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > n * n) throw Error(ErrorCode::BadRank, "rank must lie in 1..N^2");
  Rng rng(seed);
  std::vector<PureState> states;
  for (int k = 0; k < rank; ++k) states.push_back(random_pure(rng, n));
  return detail::mix(states, rng.dirichlet(static_cast<std::size_t>(rank)));
}

/// Isotropic two-qubit Werner state p |Phi+><Phi+| + (1 - p) I / 4.
inline DensityMatrix werner(double p) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::numbers::sqrt2;
  const ComplexMatrix rho = p * phi * phi.adjoint() + (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix::validate(rho, 2);
}

}  // namespace qconc::sampling
