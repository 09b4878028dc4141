#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "anyonlt/constants.hpp"
#include "anyonlt/error.hpp"

using namespace anyonlt;
using namespace anyonlt::constants;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
// I0(2) and I1(2) from tables of modified Bessel functions.
constexpr double kI0At2 = 2.2795853023360673;
constexpr double kI1At2 = 1.5906368546373291;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

ConstantLedger example_ledger() {
  ConstantLedger L;
  L.set_value("C_LE", 0.1, Provenance::exact_formula, "example");
  L.set_value("alpha", 0.0, Provenance::exact_formula, "example");
  L.set_value("N_lower", 5.0, Provenance::exact_formula, "example");
  L.set_value("N_upper", 10.0, Provenance::exact_formula, "example");
  L.set_value("C_2", 0.5, Provenance::exact_formula, "example");
  L.set_value("b_2", 16.0, Provenance::exact_formula, "example");
  return L;
}

}  // namespace

TEST(Constants, CnValues) {
  EXPECT_EQ(c_n(2), 1.0);
  EXPECT_EQ(c_n(3), 2.25);
  EXPECT_NEAR(c_n(10), 45.0 * std::pow(0.75, 8), 1e-13);
  EXPECT_THROW(c_n(1), InvalidInput);
}

TEST(Constants, ReductionToTwo) {
  EXPECT_EQ(reduction_to_two(5, 0.0, 0.5), 0.0);
  EXPECT_NEAR(reduction_to_two(2, 8.0, 0.5), kPi2 * 0.5 * 8.0 / (kPi2 + 8.0 * (0.5 + 16.0)), 1e-15);
  EXPECT_GE(reduction_to_two(4, 8.0, 0.5), reduction_to_two(4, 4.0, 0.5));
}

TEST(Constants, SimplifiedReductionAtTrialBound) {
  // At eps = 1/2 and E2 = 8 the proof form equals C_n E2 / (C1 + C2 C_n).
  for (int n = 2; n <= 30; ++n) {
    const double cn = c_n(n);
    EXPECT_NEAR(reduction_to_two(n, 8.0, 0.5), cn * 8.0 / (kReductionC1 + kReductionC2 * cn), 1e-13);
  }
  EXPECT_NEAR(kReductionC1, 27.938223012438472, 1e-12);
  EXPECT_NEAR(kReductionC2, 0.81056946913870217, 1e-14);
}

TEST(Constants, KAlpha) {
  EXPECT_NEAR(k_alpha(2.0).value, 2.0 * kI0At2 / kI1At2, 1e-13);
  EXPECT_NEAR(bessel_i0(2.0), kI0At2, 1e-15);
  EXPECT_NEAR(bessel_i1(2.0), kI1At2, 1e-15);
  const auto limit = k_alpha(0.0);
  EXPECT_EQ(limit.value, 2.0);
  EXPECT_TRUE(limit.is_limit);
  EXPECT_NEAR(k_alpha(1e-10).value, 2.0, 1e-9);
  for (int i = 1; i <= 200; ++i) EXPECT_GE(k_alpha(0.01 * i).value, 2.0);
}

TEST(Constants, MediumBoxBound) {
  EXPECT_EQ(medium_box_bound(1.0, 0.5, 1), 0.0);
  EXPECT_EQ(medium_box_bound(0.0, 0.5, 4), 0.0);
  EXPECT_DOUBLE_EQ(medium_box_bound(1.0, 2.0, 3), 3.0);
  // gamma = sqrt 2 belongs to the second branch.
  EXPECT_NEAR(medium_box_bound(1.0, std::numbers::sqrt2, 2), 2.0 * 0.5 * 2 * 1, 1e-14);
  const double k = k_alpha(0.5).value;
  const double expected = 0.5 * std::min(1.0 / (1.0 - 0.125), k / 2) / (k + 1.0 * (-std::log(0.5 / std::numbers::sqrt2))) * 3;
  EXPECT_NEAR(medium_box_bound(0.5, 0.5, 4), expected, 1e-14);
}

TEST(Constants, MediumBoxBoundContinuousInAlpha) {
  for (const double gamma : {0.1, 1.0, 1.5, 3.0})
    for (int i = 1; i <= 2000; ++i) {
      const double alpha = 0.001 * i;
      const double f = medium_box_bound(alpha, gamma, 5);
      const double g = medium_box_bound(alpha - 1e-7, gamma, 5);
      ASSERT_LT(std::abs(f - g), 1e-5 * (1 + f)) << gamma << ' ' << alpha;
    }
}

TEST(Constants, FiniteNReduction) {
  const std::map<int, double> base{{2, 1.0}, {3, 1.0}, {4, 1.0}};
  const auto r = finite_n_reduction(base, 4);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(finite_n_reduction(base, 16).value, 4.0 * r.value);
  EXPECT_EQ(finite_n_reduction(base, 64).trace.size(), 3u);
  EXPECT_THROW(finite_n_reduction({{2, 0.0}, {3, 1.0}, {4, 1.0}}, 4), PreconditionViolated);
  EXPECT_THROW(finite_n_reduction(base, 3), InvalidInput);
  EXPECT_THROW(finite_n_reduction({{2, 1.0}, {4, 1.0}}, 4), InvalidInput);
}

TEST(Constants, FiniteNHomogeneousAndQuadrupling) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::map<int, double> base;
    for (int n = 5; n <= 16; ++n) base[n] = uniform(rng, 0.1, 3.0);
    const double s = uniform(rng, 0.1, 10.0);
    std::map<int, double> scaled;
    for (const auto& [n, e] : base) scaled[n] = s * e;
    const std::int64_t N = 16 + static_cast<std::int64_t>(rng() % 10000);
    EXPECT_NEAR(finite_n_reduction(scaled, N).value, s * finite_n_reduction(base, N).value,
                1e-14 * finite_n_reduction(scaled, N).value);
    EXPECT_EQ(finite_n_reduction(base, 4 * N).value, 4.0 * finite_n_reduction(base, N).value);
  }
}

TEST(Constants, AssembleGlobalExample) {
  const auto G = assemble_global(example_ledger());
  const double cfn = (0.5 / 10.0) * 0.1 * 5.0 / (10.0 + 0.1 * 10.0);
  EXPECT_NEAR(*G.at("epsilon").value, 0.5 / 11.0, 1e-15);
  EXPECT_NEAR(*G.at("C_FN").value, cfn, 1e-15);
  EXPECT_NEAR(*G.at("C_EA").value, std::min(cfn / 16.0, 0.4), 1e-15);
}

TEST(Constants, AssembleGlobalDegenerateAndSymbolic) {
  auto L = example_ledger();
  L.set_value("C_LE", 0.0, Provenance::exact_formula, "zero");
  const auto G = assemble_global(L);
  EXPECT_EQ(*G.at("C_FN").value, 0.0);
  EXPECT_EQ(*G.at("C_EA").value, 0.0);

  auto A = example_ledger();
  A.set_abstract("b_2", "overlap constant");
  const auto S = assemble_global(A);
  EXPECT_TRUE(S.at("C_FN").value.has_value());
  EXPECT_FALSE(S.at("C_EA").value.has_value());
  EXPECT_NE(S.at("C_EA").symbolic.find("/b_2, 1/(C_2 N_lower)}"), std::string::npos);

  auto M = example_ledger();
  auto entries = M.entries();
  ConstantLedger missing;
  for (const auto& [name, e] : entries)
    if (name != "N_upper") missing.set(name, e);
  try {
    assemble_global(missing);
    FAIL() << "expected a missing-entry error";
  } catch (const LedgerIncomplete& e) {
    EXPECT_EQ(e.entry(), "N_upper");
  }
}

TEST(Constants, EpsilonBelowOneOnRandomLedgers) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 1000; ++t) {
    ConstantLedger L;
    const double nl = uniform(rng, 0.5, 100.0);
    L.set_value("C_LE", std::exp(uniform(rng, -10, 10)), Provenance::measured, "");
    L.set_value("alpha", uniform(rng, 0, 2), Provenance::measured, "");
    L.set_value("N_lower", nl, Provenance::measured, "");
    L.set_value("N_upper", nl * uniform(rng, 1, 10), Provenance::measured, "");
    L.set_value("C_2", uniform(rng, 0.01, 2), Provenance::measured, "");
    L.set_value("b_2", uniform(rng, 1, 30), Provenance::measured, "");
    EXPECT_LT(*assemble_global(L).at("epsilon").value, 1.0);
  }
}

TEST(Constants, CorridorExact) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 1000; ++t) {
    const std::int64_t L = 4 + static_cast<std::int64_t>(rng() % 1000000);
    const std::int64_t R = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(L / 4 + 1));
    const std::int64_t a = corridor_area(L, R);
    EXPECT_EQ(a, 8 * L * R - 16 * R * R);
    EXPECT_LE(a, 8 * L * R);
  }
  EXPECT_THROW(corridor_area(10, 3), InvalidInput);
}

TEST(Constants, RegimeClassification) {
  EXPECT_EQ(classify(0.01).regime, Regime::large);
  EXPECT_EQ(classify(1.0 / 24.0).regime, Regime::medium);
  EXPECT_EQ(classify(2.0).regime, Regime::medium);
  EXPECT_EQ(classify(2.5).regime, Regime::small);
  EXPECT_THROW(classify(0.5, 2.0, 1.0), InvalidInput);
}

TEST(Constants, ChainPerRegime) {
  ChainInputs in;
  in.universal_c2 = 0.5;
  in.overlap_b2 = 4.0;
  for (const double gamma : {1e-3, 0.5, 3.0}) {
    in.gamma = gamma;
    const auto L = build_chain(in);
    ASSERT_TRUE(L.at("C_LE").value.has_value());
    EXPECT_GE(*L.at("C_LE").value, 0.0);
    EXPECT_TRUE(L.at("C_EA").value.has_value());
    EXPECT_LT(*L.at("epsilon").value, 1.0);
  }
  in.gamma = 3.0;
  in.small_box_count = 2;
  in.n_lower = 5;
  const auto S = build_chain(in);
  EXPECT_EQ(S.at("N_underline").provenance, Provenance::measured);
  // min over n in [5, 10] of (n - 2)/(|alpha-1| n) is attained at n = 5.
  EXPECT_NEAR(*S.at("C_LE").value, 3.0 / (0.5 * 5.0), 1e-14);

  ChainInputs abstract_in;
  const auto A = build_chain(abstract_in);
  EXPECT_FALSE(A.at("C_EA").value.has_value());
  EXPECT_EQ(A.at("C_2").provenance, Provenance::abstract_parameter);
  EXPECT_NE(A.to_dot().find("\"C_FN\" -> \"C_EA\""), std::string::npos);
  EXPECT_TRUE(A.to_json()["C_EA"]["value"].is_null());
}
