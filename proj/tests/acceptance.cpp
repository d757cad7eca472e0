// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qconc/mixed.hpp"
#include "qconc/roofopt.hpp"
#include "qconc/sampling.hpp"
#include "qconc/spectra.hpp"

namespace {

using namespace qconc;

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Tracks the worst observed value of a quantity that must stay below a limit.
struct Worst {
  double value = 0.0;
  void see(double x) { value = std::max(value, x); }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome closed_form_two_qubit() {
  Worst random_err;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto rho = sampling::random_density(2, 1 + static_cast<int>(k % 4), sampling::derive_seed(1, k));
    random_err.see(std::abs(d_lower_bound(rho, 1, 2) - oracle::wootters_concurrence(rho.matrix())));
  }
  Worst werner_err;
  for (double p : {0.0, 0.25, 0.4, 0.5, 0.75, 1.0}) {
    werner_err.see(std::abs(d_lower_bound(sampling::werner(p), 1, 2) - std::max(0.0, (3 * p - 1) / 2)));
  }
  return {random_err.value <= 1e-8 && werner_err.value <= 1e-10,
          "max |bound - oracle| = " + fmt("%.2e", random_err.value) + ", Werner err = " +
              fmt("%.2e", werner_err.value)};
}

Outcome pure_consistency() {
  sampling::Rng rng(2);
  Worst err;
  for (int k = 0; k < 100; ++k) {
    const auto psi = sampling::random_form_a_state(rng);
    const double bound = d_lower_bound(DensityMatrix::pure(psi), 1, 2);
    const double d = generalized_concurrence_D(psi, 1, 2).value;
    const auto prof = spectrum_profile(psi, 1, 2);
    const double direct = 2.0 * std::sqrt(prof.values[0] * prof.values[1]);
    err.see(std::abs(bound - d));
    err.see(std::abs(d - direct));
  }
  return {err.value <= 1e-9, "max deviation = " + fmt("%.2e", err.value)};
}

Outcome example_formula() {
  Worst err;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto rho = sampling::random_form_a_mixture(1 + static_cast<int>(k % 4), sampling::derive_seed(3, k));
    err.see(std::abs(example_3x3_bound(rho) - d_lower_bound(rho, 1, 2)));
  }
  return {err.value <= 1e-10, "max |example - bound| = " + fmt("%.2e", err.value)};
}

Outcome bound_dominance() {
  const roof::Objective avg_d{roof::ObjectiveKind::AverageD, 1, 2};
  const roof::Objective avg_e{roof::ObjectiveKind::AverageE, 1, 2};
  double worst_d = std::numeric_limits<double>::infinity();
  double worst_e = std::numeric_limits<double>::infinity();
  double worst_iso = std::numeric_limits<double>::infinity();
  double gap_sum = 0.0;
  sampling::Rng iso_rng(4);
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto rho = sampling::random_form_a_mixture(2 + static_cast<int>(k % 2), sampling::derive_seed(4, k));
    const double bound = d_lower_bound(rho, 1, 2);
    const double ebound = eof_lower_bound(rho, 1, 2);

    roof::RoofProblem problem{rho, avg_d};
    problem.restarts = 2;
    problem.seed = k;
    const double roof_d = roof::minimize_roof(problem).value;
    problem.objective = avg_e;
    const double roof_e = roof::minimize_roof(problem).value;
    worst_d = std::min(worst_d, roof_d - bound);
    worst_e = std::min(worst_e, roof_e - ebound);
    gap_sum += roof_d - bound;

    const auto vectors = eigen_vectors_subnormalized(rho);
    const auto r = static_cast<Eigen::Index>(vectors.size());
    for (int t = 0; t < 4; ++t) {
      const ComplexMatrix v = sampling::haar_unitary(iso_rng, r + t % 3).leftCols(r);
      const auto dec = roof::transform_decomposition(vectors, v);
      worst_iso = std::min(worst_iso, roof::average_objective(dec, avg_d) - bound);
    }
  }
  const bool ok = worst_d >= -1e-6 && worst_e >= -1e-6 && worst_iso >= -1e-8;
  return {ok, "min(roofD - bound) = " + fmt("%.3e", worst_d) + ", min(roofE - Ebound) = " +
                  fmt("%.3e", worst_e) + ", min(isometry avgD - bound) = " + fmt("%.3e", worst_iso) +
                  ", mean D gap = " + fmt("%.4f", gap_sum / 50)};
}

Outcome lemma_closed_forms() {
  const spectra::EigFamily fam{spectra::FamilyKind::ArithmeticThree, 1};
  Worst lemma_err;
  Worst conv_err;
  bool negative = true;
  for (double v : {-0.2, -0.1, -0.05, -0.02, 0.02, 0.05, 0.1, 0.2}) {
    const spectra::FamilyPoint point{1.0 / 3.0 - v, v};
    const auto cf = spectra::arith3_closed_forms(1, v);
    const double lv = spectra::lemma_value(fam, point);
    const double cv = spectra::convexity_value(fam, point);
    lemma_err.see(std::abs(lv - cf.lemma));
    conv_err.see(std::abs(cv - cf.convexity));
    negative = negative && lv < 0 && cv < 0 && cf.lemma < 0 && cf.convexity < 0;
  }
  return {lemma_err.value <= 1e-6 && conv_err.value <= 1e-4 && negative,
          "lemma err = " + fmt("%.2e", lemma_err.value) + ", convexity err = " + fmt("%.2e", conv_err.value) +
              (negative ? ", all negative" : ", sign failure")};
}

Outcome eof_curve() {
  Worst top_err;
  double min_first = std::numeric_limits<double>::infinity();
  double min_second = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 3; ++m) {
    top_err.see(std::abs(spectra::eof_of_d(1.0, m) - std::log2(2.0 * m)));
    std::vector<double> e;
    for (int k = 1; k <= 19; ++k) e.push_back(spectra::eof_of_d(0.05 * k, m));
    for (std::size_t k = 1; k < e.size(); ++k) min_first = std::min(min_first, e[k] - e[k - 1]);
    for (std::size_t k = 1; k + 1 < e.size(); ++k) min_second = std::min(min_second, e[k + 1] - 2 * e[k] + e[k - 1]);
  }
  return {top_err.value <= 1e-12 && min_first > 0 && min_second > 0,
          "E(1) err = " + fmt("%.2e", top_err.value) + ", min first diff = " + fmt("%.3e", min_first) +
              ", min second diff = " + fmt("%.3e", min_second)};
}

Outcome rank_four() {
  sampling::Rng rng(7);
  Worst fifth;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const int rank = 1 + static_cast<int>(rng.uniform() * static_cast<double>(n * n));
    const auto rho = sampling::random_density(n, rank, sampling::derive_seed(7, trial));
    const auto all = SIndex::all(n);
    const auto& idx = all[static_cast<std::size_t>(rng.uniform() * static_cast<double>(all.size()))];
    const RealVector sv = lambda_singular_values(rho, idx);
    if (sv.size() > 4) fifth.see(sv(4));
  }
  return {fifth.value < 1e-10, "max 5th singular value = " + fmt("%.2e", fifth.value)};
}

Outcome local_unitary() {
  sampling::Rng rng(8);
  Worst pure_dev;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = trial % 2 == 0 ? 2 : 3;
    const auto psi = n == 2 ? sampling::random_pure(rng, 2) : sampling::random_form_a_state(rng);
    const auto moved = psi.local_unitary(sampling::haar_unitary(rng, n), sampling::haar_unitary(rng, n));
    const auto a = local_invariants(psi);
    const auto b = local_invariants(moved);
    pure_dev.see(std::abs(eof_pure(psi) - eof_pure(moved)));
    pure_dev.see(std::abs(concurrence_cn(psi) - concurrence_cn(moved)));
    pure_dev.see(std::abs(a.i0 - b.i0));
    pure_dev.see(std::abs(a.i1 - b.i1));
    pure_dev.see(std::abs(generalized_concurrence_D(psi, 1, 2).value - generalized_concurrence_D(moved, 1, 2).value));
  }
  std::array<Worst, 2> mixed_dev;  // N = 2, N = 3
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 2;
    const auto rho = sampling::random_density(n, 1 + trial % 4, sampling::derive_seed(8, trial));
    const auto moved = rho.local_unitary(sampling::haar_unitary(rng, n), sampling::haar_unitary(rng, n));
    mixed_dev[static_cast<std::size_t>(n - 2)].see(std::abs(d_lower_bound(rho, 1, 2) - d_lower_bound(moved, 1, 2)));
  }
  const bool ok = pure_dev.value <= 1e-8 && mixed_dev[0].value <= 1e-8 && mixed_dev[1].value <= 1e-8;
  return {ok, "pure max dev = " + fmt("%.2e", pure_dev.value) + ", bound max dev N=2 = " +
                  fmt("%.2e", mixed_dev[0].value) + ", N=3 = " + fmt("%.2e", mixed_dev[1].value)};
}

Outcome index_decomposition() {
  sampling::Rng rng(9);
  Worst err;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const int rank = 1 + static_cast<int>(rng.uniform() * static_cast<double>(std::min<Eigen::Index>(n * n, 6)));
    const auto rho = sampling::random_density(n, rank, sampling::derive_seed(9, trial));
    const auto all = SIndex::all(n);
    const auto& idx = all[static_cast<std::size_t>(rng.uniform() * static_cast<double>(all.size()))];
    const auto dec = optimal_index_decomposition(rho, idx);
    const auto lambda = lambda_spectrum(rho, idx);
    const RealMatrix s = s_matrix(idx, n);
    for (std::size_t k = 0; k < dec.states.size(); ++k) {
      for (std::size_t l = 0; l < dec.states.size(); ++l) {
        const Complex v = dec.states[k].dot(s * dec.states[l].conjugate());
        const double expected = k == l ? (k < 4 ? lambda[k] : 0.0) : 0.0;
        err.see(std::abs(v - expected));
      }
    }
    err.see(linalg::frobenius(dec.decomposition.reconstruct() - rho.matrix()));
  }
  return {err.value <= 1e-8, "max |<w_k|S w_l*> - Lambda_k delta_kl| = " + fmt("%.2e", err.value)};
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "two-qubit closed-form equivalence", 10, closed_form_two_qubit},
      {2, "pure-state consistency", 5, pure_consistency},
      {3, "3x3 example formula", 30, example_formula},
      {4, "bound dominance", 300, bound_dominance},
      {5, "lemma and convexity closed forms", 1, lemma_closed_forms},
      {6, "E(d) curve", 1, eof_curve},
      {7, "rank-four property", 60, rank_four},
      {8, "local-unitary invariance", 60, local_unitary},
      {9, "optimal index decomposition", 30, index_decomposition},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = out.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", c.number, c.name,
                out.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
