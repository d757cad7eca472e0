#pragma once

// Two-parameter eigenvalue families lambda_i(u, v), each eigenvalue with
// multiplicity m, and the monotonicity / convexity tests of E as a function
// of the generalized concurrence D.
//
// Normalization m * sum(lambda_i) = 1 leaves one free parameter t:
//   TwoEigen:        lambda = (t, 1/m - t),            t = u
//   ArithmeticThree: lambda = (c - t, c, c + t), c = 1/(3m), t = v
// Derivatives in D go through the chain rule d/dD = (d/dt) / (dD/dt) with
// Richardson-extrapolated central differences in t.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qconc/error.hpp"

namespace qconc::spectra {

enum class FamilyKind { TwoEigen, ArithmeticThree };

struct EigFamily {
  FamilyKind kind = FamilyKind::TwoEigen;
  int m = 1;

  [[nodiscard]] int count() const noexcept { return kind == FamilyKind::TwoEigen ? 2 : 3; }
};

/// A point (u, v) in the family's own coordinates.
struct FamilyPoint {
  double u = 0.0;
  double v = 0.0;
};

enum class Verdict { Satisfied, Violated, Inconclusive };

inline constexpr double kVerdictMargin = 1e-9;

/// Condition "value < 0" with the inconclusive band (-1e-9, 0].
inline Verdict classify(double value) {
  if (value < -kVerdictMargin) return Verdict::Satisfied;
  if (value > 0.0) return Verdict::Violated;
  return Verdict::Inconclusive;
}

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

inline double eof_from_spectrum(std::span<const double> values, int m) {
  if (m < 1) throw Error(ErrorCode::BadSpectrum, "multiplicity must be >= 1");
  double total = 0.0;
  double entropy = 0.0;
  for (double lambda : values) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::BadSpectrum, "eigenvalues must be positive");
    total += lambda;
    entropy -= m * lambda * std::log2(lambda);
  }
  if (m * total > 1.0 + 1e-8) {
    throw Error(ErrorCode::BadSpectrum, "m * sum(values) exceeds 1");
  }
  return entropy;
}

/// E(d) for two nonzero eigenvalues of multiplicity m.
inline double eof_of_d(double d, int m) {
  if (m < 1 || !(d >= 0.0) || d > 1.0) {
    throw Error(ErrorCode::OutOfRange, "eof_of_d needs 0 <= d <= 1 and m >= 1");
  }
  const double inv_m = 1.0 / m;
  const double x = 0.5 * (inv_m + inv_m * std::sqrt(1.0 - d * d));
  auto term = [](double y) { return y > 0.0 ? -y * std::log2(y) : 0.0; };
  return m * (term(x) + term(inv_m - x));
}

inline double d_two_eigen(double lambda1, double lambda2, int m) {
  return 2.0 * m * std::sqrt(lambda1 * lambda2);
}

/// Closed forms of the monotonicity sum (log2) and the convexity sum (ln)
/// for the arithmetic three-eigenvalue family.
struct Arith3ClosedForms {
  double lemma = 0.0;
  double convexity = 0.0;
};

inline Arith3ClosedForms arith3_closed_forms(int m, double v) {
  const double mv = m * v;
  if (m < 1 || v == 0.0 || !(std::abs(mv) < 1.0 / 3.0)) {
    throw Error(ErrorCode::OutOfRange, "need 0 < |v| < 1/(3m)");
  }
  const double ratio = (1.0 - 3.0 * mv) / (1.0 + 3.0 * mv);
  const double lemma =
      1.0 / (3.0 * mv * std::sqrt(3.0 * m)) * std::sqrt(1.0 - 9.0 * mv * mv) * std::log2(ratio);
  const double convexity = 1.0 / (27.0 * mv * mv * mv) * (6.0 * mv + std::log(ratio));
  return {lemma, convexity};
}

namespace detail {

struct Domain {
  double lo;
  double hi;
};

inline Domain parameter_domain(const EigFamily& f) {
  const double inv_m = 1.0 / f.m;
  if (f.kind == FamilyKind::TwoEigen) return {0.0, inv_m};
  return {-inv_m / 3.0, inv_m / 3.0};
}

inline std::vector<double> eigenvalues_at(const EigFamily& f, double t) {
  const double inv_m = 1.0 / f.m;
  if (f.kind == FamilyKind::TwoEigen) return {t, inv_m - t};
  const double c = inv_m / 3.0;
  return {c - t, c, c + t};
}

inline double concurrence_at(const EigFamily& f, double t) {
  double product = 1.0;
  for (double lambda : eigenvalues_at(f, t)) product *= lambda;
  return static_cast<double>(f.m) * f.count() * std::sqrt(product);
}

template <class F>
double richardson_first(F&& fn, double t, double h) {
  auto central = [&](double s) { return (fn(t + s) - fn(t - s)) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

template <class F>
double richardson_second(F&& fn, double t, double h) {
  const double f0 = fn(t);
  auto central = [&](double s) { return (fn(t + s) - 2.0 * f0 + fn(t - s)) / (s * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

struct CurveDerivatives {
  std::vector<double> lambda;
  std::vector<double> d_lambda;   // d lambda_i / dD
  std::vector<double> dd_lambda;  // d^2 lambda_i / dD^2
};

inline double free_parameter(const EigFamily& f, FamilyPoint p) {
  if (f.m < 1) throw Error(ErrorCode::OutOfRange, "multiplicity must be >= 1");
  double residual = 0.0;
  double t = 0.0;
  if (f.kind == FamilyKind::TwoEigen) {
    residual = f.m * (p.u + p.v) - 1.0;
    t = p.u;
  } else {
    residual = 3.0 * f.m * (p.u + p.v) - 1.0;
    t = p.v;
  }
  if (std::abs(residual) > 1e-8) {
    throw Error(ErrorCode::OffCurve,
                "point violates m * sum(lambda) = 1 (residual " + std::to_string(residual) + ")");
  }
  const Domain dom = parameter_domain(f);
  if (!(t > dom.lo && t < dom.hi)) {
    throw Error(ErrorCode::OutOfRange, "eigenvalues must be positive at the evaluation point");
  }
  return t;
}

inline CurveDerivatives curve_derivatives(const EigFamily& f, FamilyPoint p, double step) {
  const double t = free_parameter(f, p);
  const Domain dom = parameter_domain(f);
  double h = step > 0.0 ? step : 1e-3 * (dom.hi - dom.lo);
  h = std::min(h, 0.25 * std::min(t - dom.lo, dom.hi - t));

  auto dfun = [&](double s) { return concurrence_at(f, s); };
  const double dd_t = richardson_first(dfun, t, h);
  if (std::abs(dd_t) < 1e-12) {
    throw Error(ErrorCode::DegeneratePoint, "dD/dt vanishes; D is stationary here");
  }
  const double dd_tt = richardson_second(dfun, t, h);

  CurveDerivatives out;
  out.lambda = eigenvalues_at(f, t);
  const auto count = out.lambda.size();
  for (std::size_t i = 0; i < count; ++i) {
    auto lfun = [&](double s) { return eigenvalues_at(f, s)[i]; };
    const double l_t = richardson_first(lfun, t, h);
    const double l_tt = richardson_second(lfun, t, h);
    out.d_lambda.push_back(l_t / dd_t);
    out.dd_lambda.push_back((l_tt * dd_t - l_t * dd_tt) / (dd_t * dd_t * dd_t));
  }
  return out;
}

}  // namespace detail

/// Generalized concurrence D at a point of the family.
inline double family_concurrence(const EigFamily& f, FamilyPoint p) {
  return detail::concurrence_at(f, detail::free_parameter(f, p));
}

inline std::vector<double> family_eigenvalues(const EigFamily& f, FamilyPoint p) {
  return detail::eigenvalues_at(f, detail::free_parameter(f, p));
}

/// sum_i (d lambda_i / dD) log2 lambda_i; E increases with D iff negative.
inline double lemma_value(const EigFamily& f, FamilyPoint p, double step = 0.0) {
  const auto c = detail::curve_derivatives(f, p, step);
  double total = 0.0;
  for (std::size_t i = 0; i < c.lambda.size(); ++i) total += c.d_lambda[i] * std::log2(c.lambda[i]);
  return total;
}

/// dE/dD = -m sum_i log2(lambda_i) (d lambda_i / dD).
inline double dE_dD(const EigFamily& f, FamilyPoint p, double step = 0.0) {
  const auto c = detail::curve_derivatives(f, p, step);
  double total = 0.0;
  for (std::size_t i = 0; i < c.lambda.size(); ++i) {
    total -= f.m * std::log2(c.lambda[i]) * c.d_lambda[i];
  }
  return total;
}

/// sum_i (1/lambda_i)(d lambda_i/dD)^2 + (d^2 lambda_i/dD^2) ln lambda_i;
/// E is convex in D iff negative.
inline double convexity_value(const EigFamily& f, FamilyPoint p, double step = 0.0) {
  const auto c = detail::curve_derivatives(f, p, step);
  double total = 0.0;
  for (std::size_t i = 0; i < c.lambda.size(); ++i) {
    total += c.d_lambda[i] * c.d_lambda[i] / c.lambda[i] + c.dd_lambda[i] * std::log(c.lambda[i]);
  }
  return total;
}

/// Largest D reachable by the arithmetic family (v -> 0).
inline double arith3_max_concurrence(int m) { return 1.0 / std::sqrt(3.0 * m); }

/// Inverts D(v) = 3m sqrt(c (c^2 - v^2)) on v in [0, c) by bisection.
inline double arith3_v_from_concurrence(double d, int m, double tol = 1e-12) {
  const double c = 1.0 / (3.0 * m);
  const double d_max = arith3_max_concurrence(m);
  if (m < 1 || d < 0.0 || d > d_max + 1e-9) {
    throw Error(ErrorCode::OutOfRange, "D outside the arithmetic family range [0, 1/sqrt(3m)]");
  }
  auto concurrence = [&](double v) { return 3.0 * m * std::sqrt(c * std::max(c * c - v * v, 0.0)); };
  double lo = 0.0;
  double hi = c;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    // D decreases in v
    if (concurrence(mid) > d) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qconc::spectra
