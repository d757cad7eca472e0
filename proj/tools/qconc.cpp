// qconc: command-line front end for the entanglement-of-formation library.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "qconc/io.hpp"
#include "qconc/mixed.hpp"
#include "qconc/roofopt.hpp"
#include "qconc/sampling.hpp"
#include "qconc/spectra.hpp"

namespace {

using qconc::Error;
using qconc::ErrorCode;
using qconc::io::Report;

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

unsigned threads_from_env() {
  if (const char* env = std::getenv("QCONC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 0;
}

/// Thrown when --strict turns a soft numerical problem into a failure.
struct StrictFailure {
  std::string what;
};

struct Options {
  bool json = false;
  bool strict = false;
};

void emit(const Report& report, const Options& opt) {
  if (opt.json) {
    std::cout << qconc::io::serialize(report);
    return;
  }
  for (const auto& [k, v] : report.results) std::cout << k << " = " << qconc::io::format_number(v) << '\n';
  for (const auto& [k, v] : report.flags) std::cout << k << " = " << (v ? "true" : "false") << '\n';
  for (const auto& [k, v] : report.text) std::cout << k << " = " << v << '\n';
  for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
}

Report make_report(const std::string& command, const std::string& file) {
  Report r;
  r.command = command;
  if (!file.empty()) r.input_digest = qconc::io::digest(qconc::io::read_file(file));
  return r;
}

std::pair<int, int> resolve_profile(std::optional<int> m, std::optional<int> n, Eigen::Index dim) {
  if (m && n) return {*m, *n};
  if (!m && !n && dim == 2) return {1, 2};
  throw Error(ErrorCode::ValidationError, "--m and --n are required unless N = 2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of formation, generalized concurrences and their lower bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json, "Emit a machine-readable report");
  app.add_flag("--strict", opt.strict, "Exit 2 on rank violations or unconverged optimizations");


  std::string command = "qconc";
  for (int i = 1; i < argc; ++i) command += " " + std::string(argv[i]);

  std::string file;
  std::optional<int> m_opt;
  std::optional<int> n_opt;
  std::uint64_t seed = 0;
  int restarts = 4;

  auto* eof_pure = app.add_subcommand("eof-pure", "Entanglement of formation of a pure state");
  eof_pure->add_option("FILE", file)->required();

  auto* conc = app.add_subcommand("concurrence", "C2, C_N or generalized concurrence D of a pure state");
  std::string which = "cn";
  conc->add_option("FILE", file)->required();
  conc->add_option("--which", which)->check(CLI::IsMember({"c2", "cn", "D"}));
  conc->add_option("--m", m_opt);
  conc->add_option("--n", n_opt);

  auto* bound = app.add_subcommand("bound", "Lower bound on D(rho), optionally on E(rho)");
  bool no_clamp = false;
  bool with_eof = false;
  bound->add_option("FILE", file)->required();
  bound->add_option("--m", m_opt);
  bound->add_option("--n", n_opt);
  bound->add_flag("--no-clamp", no_clamp, "Keep negative Lambda differences");
  bound->add_flag("--eof", with_eof, "Also report the entanglement-of-formation bound");

  auto* roof = app.add_subcommand("roof", "Numerical convex-roof minimum of average D or E");
  std::string objective = "E";
  int t_max = 0;
  int max_sweeps = 200;
  roof->add_option("FILE", file)->required();
  roof->add_option("--objective", objective)->check(CLI::IsMember({"D", "E"}));
  roof->add_option("--m", m_opt);
  roof->add_option("--n", n_opt);
  roof->add_option("--restarts", restarts);
  roof->add_option("--seed", seed);
  roof->add_option("--t-max", t_max, "Largest decomposition size (default rank + 2)");
  roof->add_option("--max-sweeps", max_sweeps, "Sweep cap per local search");

  auto* certify = app.add_subcommand("certify", "Compare the bound with the optimized roof of average D");
  certify->add_option("FILE", file)->required();
  certify->add_option("--m", m_opt);
  certify->add_option("--n", n_opt);
  certify->add_option("--seed", seed);
  certify->add_option("--restarts", restarts);

  auto* check = app.add_subcommand("check", "Validate a state, run PPT and form-(a) detection");
  check->add_option("FILE", file)->required();

  auto* lemma = app.add_subcommand("lemma", "Monotonicity and convexity conditions of an eigenvalue family");
  std::string family = "two";
  double u = 0.0;
  double v = 0.0;
  int lemma_m = 1;
  lemma->add_option("--family", family)->check(CLI::IsMember({"two", "arith3"}));
  lemma->add_option("--m", lemma_m);
  lemma->add_option("--u", u)->required();
  lemma->add_option("--v", v)->required();

  auto* invariance = app.add_subcommand("invariance", "Deviation of the measures under random local unitaries");
  int trials = 100;
  invariance->add_option("FILE", file)->required();
  invariance->add_option("--trials", trials);
  invariance->add_option("--seed", seed);
  invariance->add_option("--m", m_opt);
  invariance->add_option("--n", n_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    const unsigned threads = threads_from_env();

    if (eof_pure->parsed()) {
      const auto psi = qconc::io::load_pure(file);
      Report r = make_report(command, file);
      r.results["eof"] = qconc::eof_pure(psi);
      emit(r, opt);
    } else if (conc->parsed()) {
      const auto psi = qconc::io::load_pure(file);
      Report r = make_report(command, file);
      if (which == "c2") {
        r.results["c2"] = qconc::concurrence_c2(psi);
      } else if (which == "cn") {
        r.results["cn"] = qconc::concurrence_cn(psi);
      } else {
        const auto [m, n] = resolve_profile(m_opt, n_opt, psi.dim());
        const auto d = qconc::generalized_concurrence_D(psi, m, n);
        r.results["D"] = d.value;
        r.flags["in_range"] = d.in_range;
        r.flags["psi_condition_iii"] = qconc::psi_condition_iii(psi, m, n);
        if (!d.in_range) r.warnings.push_back("D outside [0, 1]: (m, n) is outside the intended regime");
      }
      emit(r, opt);
    } else if (bound->parsed()) {
      const auto rho = qconc::io::load_density(file);
      const auto [m, n] = resolve_profile(m_opt, n_opt, rho.dim());
      Report r = make_report(command, file);
      const double d = qconc::d_lower_bound(rho, m, n, !no_clamp);
      r.results["D_bound"] = d;
      r.flags["clamped"] = !no_clamp;
      if (with_eof) r.results["E_bound"] = qconc::eof_lower_bound(rho, m, n);
      emit(r, opt);
    } else if (roof->parsed()) {
      const auto rho = qconc::io::load_density(file);
      const auto [m, n] = resolve_profile(m_opt, n_opt, rho.dim());
      qconc::roof::RoofProblem problem{
          rho, {objective == "D" ? qconc::roof::ObjectiveKind::AverageD : qconc::roof::ObjectiveKind::AverageE, m, n}};
      problem.restarts = restarts;
      problem.seed = seed;
      problem.t_max = t_max;
      problem.max_sweeps = max_sweeps;
      problem.threads = threads;
      const auto result = qconc::roof::minimize_roof(problem);
      Report r = make_report(command, file);
      r.results["value"] = result.value;
      r.results["iterations"] = result.iterations;
      r.results["cardinality"] = result.cardinality;
      r.results["members"] = static_cast<double>(result.decomposition.size());
      r.flags["converged"] = result.converged;
      if (!result.converged) r.warnings.push_back("optimizer hit the sweep cap");
      emit(r, opt);
      if (opt.strict && !result.converged) throw StrictFailure{"NoConvergence"};
    } else if (certify->parsed()) {
      const auto rho = qconc::io::load_density(file);
      const auto [m, n] = resolve_profile(m_opt, n_opt, rho.dim());
      const auto cert = qconc::roof::certify_bound(rho, m, n, restarts, seed, threads);
      Report r = make_report(command, file);
      r.results["bound"] = cert.bound;
      r.results["roof_min"] = cert.roof_min;
      r.results["gap"] = cert.gap;
      r.flags["violation"] = cert.violation;
      r.flags["converged"] = cert.converged;
      if (cert.violation) r.warnings.push_back("roof minimum below the bound by more than 1e-6");
      emit(r, opt);
      if (opt.strict && !cert.converged) throw StrictFailure{"NoConvergence"};
    } else if (check->parsed()) {
      const auto state = qconc::io::load_state(file);
      Report r = make_report(command, file);
      const bool pure = std::holds_alternative<qconc::PureState>(state);
      const auto rho = pure ? qconc::DensityMatrix::pure(std::get<qconc::PureState>(state))
                            : std::get<qconc::DensityMatrix>(state);
      r.text["kind"] = pure ? "pure" : "density";
      r.results["dim"] = static_cast<double>(rho.dim());
      r.results["rank"] = static_cast<double>(qconc::rank(rho));
      r.results["trace"] = rho.matrix().trace().real();
      const auto eig = qconc::linalg::hermitian_eig(rho.matrix());
      r.results["min_rho_eig"] = eig.eigenvalues(eig.eigenvalues.size() - 1);
      const auto ppt = qconc::ppt_check(rho);
      r.flags["ppt"] = ppt.is_ppt;
      r.results["min_eig"] = ppt.min_eigenvalue;
      r.flags["valid"] = true;
      if (rho.dim() == 3) {
        r.flags["form_a"] = qconc::form_a_check(rho);
      } else {
        r.text["form_a"] = "n/a (requires N = 3)";
      }
      emit(r, opt);
    } else if (lemma->parsed()) {
      using namespace qconc::spectra;
      const EigFamily fam{family == "two" ? FamilyKind::TwoEigen : FamilyKind::ArithmeticThree, lemma_m};
      const FamilyPoint point{u, v};
      Report r = make_report(command, "");
      r.results["D"] = family_concurrence(fam, point);
      const double lv = lemma_value(fam, point);
      const double cv = convexity_value(fam, point);
      r.results["lemma_value"] = lv;
      r.results["dE_dD"] = dE_dD(fam, point);
      r.results["convexity_value"] = cv;
      r.text["monotone"] = std::string(to_string(classify(lv)));
      r.text["convex"] = std::string(to_string(classify(cv)));
      if (fam.kind == FamilyKind::ArithmeticThree) {
        const auto cf = arith3_closed_forms(lemma_m, v);
        r.results["lemma_closed_form"] = cf.lemma;
        r.results["convexity_closed_form"] = cf.convexity;
      }
      emit(r, opt);
    } else if (invariance->parsed()) {
      const auto state = qconc::io::load_state(file);
      Report r = make_report(command, file);
      qconc::sampling::Rng rng(seed);
      if (const auto* psi = std::get_if<qconc::PureState>(&state)) {
        const auto n = psi->dim();
        const double e0 = qconc::eof_pure(*psi);
        const double c0 = qconc::concurrence_cn(*psi);
        const auto inv0 = qconc::local_invariants(*psi);
        std::optional<double> d0;
        if (m_opt && n_opt) d0 = qconc::generalized_concurrence_D(*psi, *m_opt, *n_opt).value;
        double de = 0, dc = 0, di0 = 0, di1 = 0, dd = 0;
        for (int k = 0; k < trials; ++k) {
          const auto uu = qconc::sampling::haar_unitary(rng, n);
          const auto vv = qconc::sampling::haar_unitary(rng, n);
          const auto moved = psi->local_unitary(uu, vv);
          de = std::max(de, std::abs(qconc::eof_pure(moved) - e0));
          dc = std::max(dc, std::abs(qconc::concurrence_cn(moved) - c0));
          const auto inv = qconc::local_invariants(moved);
          di0 = std::max(di0, std::abs(inv.i0 - inv0.i0));
          di1 = std::max(di1, std::abs(inv.i1 - inv0.i1));
          if (d0) dd = std::max(dd, std::abs(qconc::generalized_concurrence_D(moved, *m_opt, *n_opt).value - *d0));
        }
        r.results["max_dev_eof"] = de;
        r.results["max_dev_cn"] = dc;
        r.results["max_dev_i0"] = di0;
        r.results["max_dev_i1"] = di1;
        if (d0) r.results["max_dev_D"] = dd;
      } else {
        const auto& rho = std::get<qconc::DensityMatrix>(state);
        const auto [m, n] = resolve_profile(m_opt, n_opt, rho.dim());
        const double b0 = qconc::d_lower_bound(rho, m, n);
        double db = 0;
        for (int k = 0; k < trials; ++k) {
          const auto uu = qconc::sampling::haar_unitary(rng, rho.dim());
          const auto vv = qconc::sampling::haar_unitary(rng, rho.dim());
          db = std::max(db, std::abs(qconc::d_lower_bound(rho.local_unitary(uu, vv), m, n) - b0));
        }
        r.results["max_dev_D_bound"] = db;
      }
      r.results["trials"] = trials;
      emit(r, opt);
    }
  } catch (const StrictFailure& f) {
    std::cerr << "error: " << f.what << " (--strict)\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::RankViolation:
      case ErrorCode::ConvergenceFailure:
      case ErrorCode::NumericalInconsistency:
        return kExitNumerical;
      default:
        return kExitInput;
    }
  }
  return 0;
}
