#include <gtest/gtest.h>

#include "anyonlt/error.hpp"
#include "anyonlt/report.hpp"
#include "anyonlt/suites.hpp"
#include "anyonlt/svg.hpp"

using namespace anyonlt;

TEST(Config, DefaultsRoundTrip) {
  const report::RunConfig c = report::parse_config("{}");
  EXPECT_EQ(c.suite, "all");
  EXPECT_EQ(report::to_json(report::config_from_json(report::to_json(c))), report::to_json(c));
}

TEST(Config, UnknownKeyReportsPosition) {
  const std::string text = "{\n  \"seed\": 3,\n  \"magnetic\": {\"n_side\": 33, \"bogus\": 1}\n}\n";
  try {
    report::parse_config(text);
    FAIL() << "expected a config error";
  } catch (const report::ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 30);
  }
}

TEST(Config, SyntaxErrorReportsPosition) {
  try {
    report::parse_config("{\n  \"seed\": ,\n}");
    FAIL() << "expected a config error";
  } catch (const report::ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 11);
  }
}

TEST(Config, WrongTypesAndValuesRejected) {
  EXPECT_THROW(report::parse_config("{\"seed\": \"x\"}"), report::ConfigError);
  EXPECT_THROW(report::parse_config("{\"suite\": \"nope\"}"), report::ConfigError);
  EXPECT_THROW(report::parse_config("{\"two_anyon\": {\"mode\": \"half\"}}"), report::ConfigError);
}

TEST(Report, OverallStatusAndDeterminism) {
  report::RunConfig c;
  c.suite = "constants";
  const auto a = suites::run_suite(c);
  const auto b = suites::run_suite(c);
  EXPECT_TRUE(a.report.passed());
  EXPECT_EQ(a.report.to_json().dump(), b.report.to_json().dump());
  EXPECT_EQ(a.files.at("ledger.dot"), b.files.at("ledger.dot"));
  EXPECT_FALSE(a.report.to_json().dump().find("runtime") != std::string::npos);

  report::Report r;
  r.checks.push_back({"x", report::Status::pass, 1, 1, 0, "", 0});
  r.checks.push_back({"y", report::Status::skipped, 1, 1, 0, "", 0});
  EXPECT_TRUE(r.passed());
  r.checks.push_back({"z", report::Status::fail, 1, 1, 0, "", 0});
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.to_json()["status"], "fail");
}

TEST(Report, BesselPlateauCase) {
  report::RunConfig c;
  c.suite = "verify-bessel";
  c.bessel.nu = 1.0;
  c.bessel.gamma = 1.0;
  const auto out = suites::run_suite(c);
  ASSERT_EQ(out.report.checks.size(), 1u);
  EXPECT_EQ(out.report.checks[0].status, report::Status::pass);
  EXPECT_EQ(out.report.checks[0].value["g"], 1.0);
}

TEST(Svg, DeterministicAndSelfContained) {
  const svg::Series s{"g", {1e-3, 1e-2, 1e-1}, {1.8, 1.7, 1.5}};
  const auto a = svg::line_plot({s}, {"t", "x", "y", true});
  EXPECT_EQ(a, svg::line_plot({s}, {"t", "x", "y", true}));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_EQ(a.find("href"), std::string::npos);
  const svg::Heatmap map{2, 2, 0, 1, 0, 1, {0, 1, 2, 3}};
  const auto h = svg::overlay_plot(map, {{0.1, 0.1, 0.5, 0.5}}, {"m", "x", "y", false});
  EXPECT_NE(h.find("stroke=\"#d62728\""), std::string::npos);
}

TEST(Svg, EmptyInputRejected) {
  EXPECT_THROW(svg::line_plot({}, {}), InvalidInput);
  EXPECT_THROW(svg::line_plot({{"e", {}, {}}}, {}), InvalidInput);
  EXPECT_THROW(svg::heatmap_plot({}, {}), InvalidInput);
}
