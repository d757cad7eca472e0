#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qconc/io.hpp"
#include "qconc/sampling.hpp"

namespace {

using namespace qconc;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::BadShape;
}

TEST(StateFile, RoundTripPureAndDensity) {
  const auto psi = sampling::random_pure(3, 1);
  const auto back = io::parse_state(io::state_file(psi));
  ASSERT_TRUE(std::holds_alternative<PureState>(back));
  EXPECT_EQ(std::get<PureState>(back).coeffs(), psi.coeffs());

  const auto rho = sampling::random_form_a_mixture(3, 2);
  const auto back2 = io::parse_state(io::state_file(rho));
  ASSERT_TRUE(std::holds_alternative<DensityMatrix>(back2));
  EXPECT_LT((std::get<DensityMatrix>(back2).matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(StateFile, Errors) {
  EXPECT_EQ(code_of([] { io::parse_state("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_state(R"({"kind":"pure","dim":2,"data":[[1,0],[0,0]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_state(R"({"kind":"mixed","dim":2,"data":[]})"); }), ErrorCode::ParseError);
  const std::string trace09 =
      R"({"kind":"density","dim":2,"data":[[[0.225,0],[0,0],[0,0],[0,0]],[[0,0],[0.225,0],[0,0],[0,0]],)"
      R"([[0,0],[0,0],[0.225,0],[0,0]],[[0,0],[0,0],[0,0],[0.225,0]]]})";
  EXPECT_EQ(code_of([&] { io::parse_state(trace09); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { io::read_file("/nonexistent/missing.json"); }), ErrorCode::ParseError);
}

TEST(StateFile, Fixtures) {
  const std::string dir = QCONC_FIXTURE_DIR;
  const auto bell = io::load_density(dir + "/bell.json");
  EXPECT_FALSE(ppt_check(bell).is_ppt);
  const auto werner = io::load_density(dir + "/werner_p05.json");
  EXPECT_NEAR(d_lower_bound(werner, 1, 2), 0.25, 1e-12);
  const auto fa = io::load_density(dir + "/form_a_rank3.json");
  EXPECT_TRUE(form_a_check(fa));
  EXPECT_EQ(rank(fa), 3);
  EXPECT_NO_THROW(io::load_pure(dir + "/pure_2x2.json"));
  EXPECT_EQ(code_of([&] { io::load_pure(dir + "/bell.json"); }), ErrorCode::ValidationError);
}

TEST(Report, SerializeParseSerializeIsByteIdentical) {
  io::Report r;
  r.command = "qconc bound \"x.json\" --eof";
  r.input_digest = io::digest("abc");
  r.results = {{"D_bound", 0.1 + 0.2}, {"E_bound", 1e-300}, {"neg", -3.5}, {"big", 6.02214076e23},
               {"zero", -0.0}, {"nan", std::nan("")}};
  r.flags = {{"clamped", true}, {"converged", false}};
  r.text = {{"kind", "density\nline"}};
  r.warnings = {"w1", "quote \" inside"};
  const std::string once = io::serialize(r);
  const std::string twice = io::serialize(io::parse_report(once));
  EXPECT_EQ(once, twice);
  const auto parsed = io::parse_report(once);
  EXPECT_EQ(parsed.results.at("D_bound"), 0.1 + 0.2);
  EXPECT_TRUE(std::isnan(parsed.results.at("nan")));

  io::Report empty;
  EXPECT_EQ(io::serialize(io::parse_report(io::serialize(empty))), io::serialize(empty));
}

TEST(Report, FuzzedRoundTrip) {
  sampling::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    io::Report r;
    r.command = "cmd" + std::to_string(trial);
    for (int k = 0; k < 5; ++k) {
      const double x = (rng.uniform() - 0.5) * std::pow(10.0, (rng.uniform() - 0.5) * 40);
      r.results["k" + std::to_string(k)] = x;
    }
    const std::string once = io::serialize(r);
    ASSERT_EQ(io::serialize(io::parse_report(once)), once);
    ASSERT_EQ(io::parse_report(once), r);
  }
}

TEST(Digest, Stable) {
  EXPECT_EQ(io::digest(""), "cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
}

TEST(FormatNumber, Cases) {
  EXPECT_EQ(io::format_number(0.25), "0.25");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "null");
  EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
}

}  // namespace
