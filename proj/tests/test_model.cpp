#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "anyonlt/config_io.hpp"
#include "anyonlt/error.hpp"
#include "anyonlt/model.hpp"

using namespace anyonlt;
using namespace anyonlt::model;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

}  // namespace

TEST(Model, RegularizedDistanceMatchesMaxDefinition) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000000; ++t) {
    const Vec2 x(uniform(rng, -2, 2), uniform(rng, -2, 2));
    const double r = uniform(rng, 1e-6, 1.0);
    const double d = regularized_distance(x, r);
    ASSERT_EQ(d, std::max(x.norm(), r));
    ASSERT_GE(d, r);
  }
}

TEST(Model, SmearedCoulombIsC1AcrossTheDisk) {
  for (const double r : {1e-3, 0.1, 0.7, 2.0}) {
    // Both branches meet at log R with radial slope 1/R.
    EXPECT_NEAR(smeared_coulomb(Vec2(0.5 * r, 0), r), std::log(r) + 0.5 * (0.25 - 1.0), 1e-12);
    EXPECT_NEAR(smeared_coulomb(Vec2(0, 2 * r), r), std::log(2 * r), 1e-12);
    const Vec2 on(r, 0.0);
    EXPECT_NEAR(smeared_coulomb(on, r), std::log(r), 1e-12);
    const double h = 1e-7 * r;
    const double left = (smeared_coulomb(Vec2(r, 0), r) - smeared_coulomb(Vec2(r - h, 0), r)) / h;
    const double right = (smeared_coulomb(Vec2(r + h, 0), r) - smeared_coulomb(Vec2(r, 0), r)) / h;
    EXPECT_NEAR(left * r, 1.0, 1e-5);
    EXPECT_NEAR(right * r, 1.0, 1e-5);
  }
}

TEST(Model, PairKernelIsGradPerpOfSmearedPotential) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const double r = uniform(rng, 0.05, 0.5);
    const Vec2 x(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double h = 1e-6;
    const Vec2 grad((smeared_coulomb(x + Vec2(h, 0), r) - smeared_coulomb(x - Vec2(h, 0), r)) / (2 * h),
                    (smeared_coulomb(x + Vec2(0, h), r) - smeared_coulomb(x - Vec2(0, h), r)) / (2 * h));
    EXPECT_NEAR((pair_kernel(x, r) - perp(grad)).norm(), 0.0, 1e-6);
  }
  EXPECT_EQ(pair_kernel(Vec2::Zero(), 0.1), Vec2::Zero());
}

TEST(Model, VectorPotentialBound) {
  std::mt19937_64 rng(3);
  const SquareDomain q = SquareDomain::unit();
  for (int t = 0; t < 500; ++t) {
    const double r = uniform(rng, 0.01, 0.3);
    std::vector<Vec2> inside, outside;
    const int n = 1 + static_cast<int>(rng() % 5), m = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) inside.emplace_back(uniform(rng, 0, 1), uniform(rng, 0, 1));
    for (int i = 0; i < m; ++i) outside.emplace_back(uniform(rng, 1.01, 2), uniform(rng, -1, 2));
    const Configuration c(q, inside, outside);
    for (int j = 0; j < n; ++j) EXPECT_LE(vector_potential(j, c, r).norm(), (n + m - 1) / r + 1e-12);
  }
}

TEST(Model, FluxPotentialCountsNeighboursWithinR) {
  const Configuration c(SquareDomain::unit(), {{0.5, 0.5}, {0.55, 0.5}, {0.9, 0.9}}, {{1.05, 0.9}});
  EXPECT_DOUBLE_EQ(flux_potential(0, c, 0.1), 2.0 / 0.01 * 1);
  EXPECT_DOUBLE_EQ(flux_potential(2, c, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(flux_potential(2, c, 0.2), 2.0 / 0.04 * 1);
  EXPECT_DOUBLE_EQ(flux_potential(2, c, 0.01), 0.0);
}

TEST(Model, FluxPotentialRelabelingAndTranslationInvariant) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 4; ++i) pts.emplace_back(uniform(rng, 0.2, 0.6), uniform(rng, 0.2, 0.6));
    const double r = uniform(rng, 0.05, 0.3);
    const Configuration a(SquareDomain::unit(), pts);
    std::vector<Vec2> swapped{pts[0], pts[3], pts[1], pts[2]};
    const Configuration b(SquareDomain::unit(), swapped);
    const Vec2 shift(uniform(rng, 0, 0.3), uniform(rng, 0, 0.3));
    std::vector<Vec2> moved;
    for (const auto& p : pts) moved.push_back(p + shift);
    const Configuration c(SquareDomain::unit(), moved);
    EXPECT_EQ(flux_potential(0, a, r), flux_potential(0, b, r));
    EXPECT_EQ(flux_potential(0, a, r), flux_potential(0, c, r));
  }
}

TEST(Model, EnergyComponentsNonnegativeAndWeighted) {
  std::mt19937_64 rng(5);
  const AnyonParams p(0.7, 0.2);
  for (int t = 0; t < 500; ++t) {
    const Configuration c(SquareDomain::unit(), {{uniform(rng, 0, 1), uniform(rng, 0, 1)}, {uniform(rng, 0, 1), uniform(rng, 0, 1)}});
    StateSample s;
    s.psi = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    for (int j = 0; j < 2; ++j)
      s.gradients.push_back(CVec2(Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)), Complex(uniform(rng, -1, 1), uniform(rng, -1, 1))));
    const auto full = energy_density(s, c, p);
    const auto kin = energy_density(s, c, p, {EnergyMode::kinetic_only, FluxWeight::unit});
    EXPECT_GE(full.e1, 0.0);
    EXPECT_GE(full.e2_grad, 0.0);
    EXPECT_GE(full.e2_pot, 0.0);
    EXPECT_NEAR(full.e1, 0.5 * kin.e1, 1e-12 * (1 + kin.e1));
    EXPECT_EQ(kin.e2_grad, 0.0);
  }
}

TEST(Model, EnergyDensityHandComputed) {
  // One particle at the origin corner, no partners: A = 0, V = 0.
  const Configuration c(SquareDomain::unit(), {{0.5, 0.5}});
  StateSample s{Complex(2.0, 0.0), {CVec2(Complex(1.0, 0.0), Complex(0.0, 3.0))}};
  const auto e = energy_density(s, c, AnyonParams(1.0, 0.1));
  EXPECT_DOUBLE_EQ(e.e1, 0.5 * (1.0 + 9.0));
  // grad|psi| = Re(conj(psi) grad psi)/|psi| = (1, 0).
  EXPECT_DOUBLE_EQ(e.e2_grad, 0.25);
  EXPECT_DOUBLE_EQ(e.e2_pot, 0.0);
}

TEST(Model, RejectsInvalidParameters) {
  EXPECT_THROW(AnyonParams(2.5, 0.1), InvalidInput);
  EXPECT_THROW(AnyonParams(0.5, 0.0), InvalidInput);
  EXPECT_THROW(Configuration(SquareDomain::unit(), {{1.5, 0.5}}), InvalidInput);
  EXPECT_THROW(Configuration(SquareDomain::unit(), {{0.5, 0.5}}, {{0.5, 0.5}}), InvalidInput);
}

TEST(ConfigIo, RoundTripAndStrictKeys) {
  ConfigurationDocument doc{AnyonParams(0.5, 0.01), Configuration(SquareDomain::unit(), {{0.25, 0.5}}, {{1.5, 0.5}})};
  const auto text = dump_configuration(doc);
  const auto back = parse_configuration(text);
  EXPECT_EQ(dump_configuration(back), text);
  auto j = nlohmann::json::parse(text);
  j["extra"] = 1;
  EXPECT_THROW(configuration_from_json(j), InvalidInput);
}
