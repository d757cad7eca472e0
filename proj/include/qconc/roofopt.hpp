#pragma once

// Convex-roof oracle: minimizes the average of a pure-state functional over
// decompositions |w_k> = sum_l conj(V_kl) |v_l> of rho, where |v_l> are the
// subnormalized eigenvectors and V is a t x r matrix with orthonormal
// columns. Local search sweeps two-row unitary rotations of V.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "qconc/mixed.hpp"
#include "qconc/sampling.hpp"

namespace qconc::roof {

enum class ObjectiveKind { AverageE, AverageD };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::AverageE;
  int m = 1;
  int n = 2;
};

namespace detail {

/// D from a descending Schmidt spectrum, zero eigenvalues allowed inside the
/// top m*n: eigenvalues past index m*n must stay below tol and each group of
/// m must agree within tol.
inline double concurrence_from_spectrum(const RealVector& spectrum, int m, int n, double tol) {
  const Eigen::Index used = static_cast<Eigen::Index>(m) * n;
  if (m < 1 || n < 1 || used > spectrum.size()) {
    throw Error(ErrorCode::ProfileMismatch, "need m, n >= 1 and m*n <= N");
  }
  for (Eigen::Index k = used; k < spectrum.size(); ++k) {
    if (spectrum(k) >= tol) {
      throw Error(ErrorCode::ProfileMismatch, "member has more than m*n nonzero eigenvalues");
    }
  }
  double product = 1.0;
  for (int g = 0; g < n; ++g) {
    const Eigen::Index first = static_cast<Eigen::Index>(g) * m;
    if (spectrum(first) - spectrum(first + m - 1) > tol) {
      throw Error(ErrorCode::ProfileMismatch, "member eigenvalues do not form m-fold groups");
    }
    product *= spectrum.segment(first, m).mean();
  }
  return static_cast<double>(m) * n * std::sqrt(product);
}

inline double objective_from_spectrum(const RealVector& spectrum, const Objective& obj) {
  if (obj.kind == ObjectiveKind::AverageE) return qconc::detail::entropy_bits(spectrum);
  return concurrence_from_spectrum(spectrum, obj.m, obj.n, 1e-6);
}

}  // namespace detail

/// Per-member D used by the roof objective (see concurrence_from_spectrum).
inline double member_concurrence(const PureState& psi, int m, int n, double tol = 1e-6) {
  return detail::concurrence_from_spectrum(schmidt_spectrum(psi), m, n, tol);
}

inline double pure_objective(const PureState& psi, const Objective& obj) {
  return detail::objective_from_spectrum(schmidt_spectrum(psi), obj);
}

inline double average_objective(const Decomposition& d, const Objective& obj) {
  double total = 0.0;
  for (const auto& mem : d.members) total += mem.weight * pure_objective(mem.state, obj);
  return total;
}

/// Members of the decomposition generated by a columns-orthonormal V.
inline Decomposition transform_decomposition(const std::vector<ComplexVector>& vectors,
                                             const ComplexMatrix& v) {
  const auto r = static_cast<Eigen::Index>(vectors.size());
  if (r == 0 || v.cols() != r || v.rows() < r) {
    throw Error(ErrorCode::NotIsometry, "V must be t x r with t >= r");
  }
  if ((v.adjoint() * v - ComplexMatrix::Identity(r, r)).norm() > 1e-10) {
    throw Error(ErrorCode::NotIsometry, "columns of V are not orthonormal");
  }
  return decomposition_from_vectors(vectors, v);
}

struct RoofProblem {
  DensityMatrix target;
  Objective objective{};
  int t_max = 0;  // 0 selects rank + 2
  int restarts = 4;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int max_sweeps = 200;
  unsigned threads = 0;  // 0 selects hardware concurrency
};

struct RoofResult {
  double value = std::numeric_limits<double>::infinity();
  Decomposition decomposition;
  int iterations = 0;
  bool converged = false;
  int cardinality = 0;
  int restart = 0;
  /// Objective after every accepted sweep, one trace per (t, restart) task.
  std::vector<std::vector<double>> traces;
};

namespace detail {

/// p_k f(psi_k) for the member |w_k> = basis * conj(row_k)^T; +inf when the
/// member violates the objective's spectrum profile. Kn is the compile-time
/// factor dimension (Eigen::Dynamic for any N).
template <int Kn>
double member_term(const ComplexMatrix& basis, const ComplexMatrix& row, const Objective& obj,
                   Eigen::Index n) {
  using Square = Eigen::Matrix<Complex, Kn, Kn>;
  const ComplexVector w = basis * row.adjoint();
  const double weight = w.squaredNorm();
  if (weight < 1e-14) return 0.0;
  Square a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index p = 0; p < n; ++p) a(i, p) = w(n * i + p);
  const Square rho1 = a * a.adjoint() / weight;
  Eigen::SelfAdjointEigenSolver<Square> solver(rho1, Eigen::EigenvaluesOnly);
  const RealVector spectrum = solver.eigenvalues().reverse().cwiseMax(0.0);
  try {
    return weight * objective_from_spectrum(spectrum, obj);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProfileMismatch) return std::numeric_limits<double>::infinity();
    throw;
  }
}

/// Evaluates the average objective of the decomposition generated by V
/// without building PureState values.
class RoofEvaluator {
 public:
  RoofEvaluator(const std::vector<ComplexVector>& vectors, Objective obj)
      : basis_(vectors.front().size(), static_cast<Eigen::Index>(vectors.size())),
        obj_(obj),
        n_(static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(vectors.front().size()))))) {
    for (std::size_t l = 0; l < vectors.size(); ++l) basis_.col(static_cast<Eigen::Index>(l)) = vectors[l];
  }

  [[nodiscard]] double term(const ComplexMatrix& row) const {
    switch (n_) {
      case 2: return member_term<2>(basis_, row, obj_, n_);
      case 3: return member_term<3>(basis_, row, obj_, n_);
      case 4: return member_term<4>(basis_, row, obj_, n_);
      default: return member_term<Eigen::Dynamic>(basis_, row, obj_, n_);
    }
  }

  [[nodiscard]] std::vector<double> terms(const ComplexMatrix& v) const {
    std::vector<double> out;
    for (Eigen::Index k = 0; k < v.rows(); ++k) out.push_back(term(v.row(k)));
    return out;
  }

  [[nodiscard]] double total(const ComplexMatrix& v) const {
    double sum = 0.0;
    for (double x : terms(v)) sum += x;
    return sum;
  }

 private:
  ComplexMatrix basis_;
  Objective obj_;
  Eigen::Index n_;
};

inline double objective_or_inf(const std::vector<ComplexVector>& vectors, const ComplexMatrix& v,
                               const Objective& obj) {
  return RoofEvaluator(vectors, obj).total(v);
}

/// Left-multiplies rows a and b of V by [[c, -e^{i phi} s], [e^{-i phi} s, c]].
inline ComplexMatrix rotate_rows(const ComplexMatrix& v, Eigen::Index a, Eigen::Index b,
                                 double theta, double phi) {
  ComplexMatrix out = v;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  out.row(a) = c * v.row(a) - e * s * v.row(b);
  out.row(b) = std::conj(e) * s * v.row(a) + c * v.row(b);
  return out;
}

struct LineResult {
  double theta;
  double value;
};

/// Grid bracket over one period [-pi/2, pi/2) followed by golden section.
template <class F>
LineResult line_search(F&& g, double current) {
  constexpr int kGrid = 8;
  constexpr double kPeriod = std::numbers::pi;
  constexpr double kSpacing = kPeriod / kGrid;
  LineResult best{0.0, current};
  for (int j = 0; j < kGrid; ++j) {
    if (2 * j == kGrid) continue;  // theta = 0 is the current point
    const double theta = j * kSpacing - 0.5 * kPeriod;
    const double val = g(theta);
    if (val < best.value) best = {theta, val};
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best.theta - kSpacing;
  double hi = best.theta + kSpacing;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

struct LocalRun {
  double value = std::numeric_limits<double>::infinity();
  ComplexMatrix v;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> trace;
};

inline LocalRun local_search(const std::vector<ComplexVector>& vectors, ComplexMatrix v,
                             const Objective& obj, double tol, int max_sweeps) {
  LocalRun run;
  const RoofEvaluator eval(vectors, obj);
  std::vector<double> terms = eval.terms(v);
  double current = 0.0;
  for (double x : terms) current += x;
  run.trace.push_back(current);
  const Eigen::Index t = v.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double start = current;
    for (Eigen::Index a = 0; a < t; ++a) {
      for (Eigen::Index b = a + 1; b < t; ++b) {
        for (double phi : {0.0, 0.5 * std::numbers::pi}) {
          // only members a and b change under the rotation
          const double others = current - terms[a] - terms[b];
          const Complex e = std::polar(1.0, phi);
          auto g = [&](double theta) {
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const ComplexMatrix row_a = c * v.row(a) - e * s * v.row(b);
            const ComplexMatrix row_b = std::conj(e) * s * v.row(a) + c * v.row(b);
            return others + eval.term(row_a) + eval.term(row_b);
          };
          const LineResult step = line_search(g, current);
          if (step.value < current) {
            ComplexMatrix candidate = rotate_rows(v, a, b, step.theta, phi);
            std::vector<double> candidate_terms = eval.terms(candidate);
            double value = 0.0;
            for (double x : candidate_terms) value += x;
            if (value < current) {
              v = std::move(candidate);
              terms = std::move(candidate_terms);
              current = value;
            }
          }
        }
      }
    }
    run.sweeps = sweep + 1;
    run.trace.push_back(current);
    if (std::isfinite(start) && start - current < tol) {
      run.converged = true;
      break;
    }
  }
  run.value = current;
  run.v = std::move(v);
  return run;
}

}  // namespace detail

/// Best average objective over all restarts and cardinalities rank..t_max.
/// Tasks are independent and reduced in task order, so the result does not
/// depend on the number of worker threads.
inline RoofResult minimize_roof(const RoofProblem& problem) {
  const auto vectors = eigen_vectors_subnormalized(problem.target);
  const int r = static_cast<int>(vectors.size());
  const int t_max = problem.t_max > 0 ? std::max(problem.t_max, r) : r + 2;
  const int restarts = std::max(problem.restarts, 1);

  struct Task {
    int t;
    int restart;
  };
  std::vector<Task> tasks;
  for (int t = r; t <= t_max; ++t)
    for (int k = 0; k < restarts; ++k) tasks.push_back({t, k});

  std::vector<detail::LocalRun> runs(tasks.size());
  auto run_task = [&](std::size_t index) {
    const Task task = tasks[index];
    ComplexMatrix v;
    if (task.t == r && task.restart == 0) {
      v = ComplexMatrix::Identity(r, r);
    } else {
      const auto seed = sampling::derive_seed(sampling::derive_seed(problem.seed, task.t), task.restart);
      v = sampling::haar_unitary(task.t, seed).leftCols(r);
    }
    runs[index] = detail::local_search(vectors, std::move(v), problem.objective, problem.tol,
                                       problem.max_sweeps);
  };

  unsigned workers = problem.threads > 0 ? problem.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(tasks.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < tasks.size(); i += workers) run_task(i);
      });
    }
  }

  // Later tasks (larger t) must win by more than roundoff, so ties keep the
  // smaller decomposition.
  constexpr double kTieMargin = 1e-12;
  RoofResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    result.traces.push_back(runs[i].trace);
    if (runs[i].value < runs[best].value - kTieMargin) best = i;
  }
  const auto& winner = runs[best];
  result.value = winner.value;
  result.iterations = winner.sweeps;
  result.converged = winner.converged && std::isfinite(winner.value);
  result.cardinality = tasks[best].t;
  result.restart = tasks[best].restart;
  if (std::isfinite(winner.value)) {
    result.decomposition = decomposition_from_vectors(vectors, winner.v);
    result.value = average_objective(result.decomposition, problem.objective);
  }
  return result;
}

struct CertifyReport {
  double bound = 0.0;
  double roof_min = 0.0;
  double gap = 0.0;
  bool violation = false;
  bool converged = false;
};

/// Compares the closed-form bound with the optimized roof of average D.
inline CertifyReport certify_bound(const DensityMatrix& rho, int m, int n, int restarts = 4,
                                   std::uint64_t seed = 0, unsigned threads = 0) {
  RoofProblem problem{rho, {ObjectiveKind::AverageD, m, n}};
  problem.restarts = restarts;
  problem.seed = seed;
  problem.threads = threads;
  const RoofResult roof = minimize_roof(problem);
  CertifyReport report;
  report.bound = d_lower_bound(rho, m, n, true);
  report.roof_min = roof.value;
  report.gap = roof.value - report.bound;
  report.violation = report.gap < -1e-6;
  report.converged = roof.converged;
  return report;
}

}  // namespace qconc::roof
