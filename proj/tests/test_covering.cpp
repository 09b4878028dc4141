#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "anyonlt/covering.hpp"
#include "anyonlt/error.hpp"

using namespace anyonlt;
using namespace anyonlt::covering;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

// Density a + b x + c y sampled on a grid; bilinear interpolation is exact.
DensityGrid linear_density(double a, double b, double c, double h, int n) {
  std::vector<double> v;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v.push_back(a + b * h * i + c * h * j);
  return DensityGrid({0, 0}, h, n, n, v);
}

double linear_mass(double a, double b, double c, Vec2 lo, Vec2 hi) {
  const double w = hi.x() - lo.x(), t = hi.y() - lo.y();
  return a * w * t + b * 0.5 * (hi.x() * hi.x() - lo.x() * lo.x()) * t + c * 0.5 * (hi.y() * hi.y() - lo.y() * lo.y()) * w;
}

}  // namespace

TEST(Covering, MassOfLinearDensityIsExact) {
  const double h = 0.05;
  const auto d = linear_density(1.0, 2.0, 3.0, h, 21);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Vec2 lo(uniform(rng, -0.2, 1.0), uniform(rng, -0.2, 1.0));
    Vec2 hi = lo + Vec2(uniform(rng, 0, 0.6), uniform(rng, 0, 0.6));
    const Vec2 clo = lo.cwiseMax(Vec2(0, 0)), chi = hi.cwiseMin(Vec2(1, 1));
    const double expected = (chi.array() > clo.array()).all() ? linear_mass(1, 2, 3, clo, chi) : 0.0;
    EXPECT_NEAR(d.mass_in(lo, hi), expected, 1e-12);
  }
  EXPECT_NEAR(d.total_mass(), linear_mass(1, 2, 3, {0, 0}, {1, 1}), 1e-12);
}

TEST(Covering, SquareMassMonotoneInSide) {
  const auto d = gaussian_density({0, 0}, 1.0, 1.0, 1.0 / 32, {0.4, 0.6}, 0.15, 50.0);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Vec2 c(uniform(rng, 0, 1), uniform(rng, 0, 1));
    double prev = 0.0;
    for (int k = 1; k <= 60; ++k) {
      const double m = square_mass(d, c, 0.04 * k);
      ASSERT_GE(m, prev);
      prev = m;
    }
  }
}

TEST(Covering, CalibratedSquareHitsTarget) {
  const auto d = two_bump_density({0, 0}, 1.0, 1.0, 1.0 / 32, 40.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Vec2 c(uniform(rng, 0, 1), uniform(rng, 0, 1));
    const double target = uniform(rng, 1.0, 20.0);
    const double side = calibrated_square(d, c, target);
    EXPECT_NEAR(square_mass(d, c, side), target, 1e-10 * target);
    EXPECT_LT(square_mass(d, c, side * (1 - 1e-9)), target);
  }
  EXPECT_THROW(calibrated_square(d, {0.5, 0.5}, 41.0), UnreachableMass);
}

TEST(Covering, QuadratureErrorVanishesForBilinearData) {
  const auto d = linear_density(0.5, 1.0, -0.25, 1.0 / 16, 17);
  const double err = quadrature_error(d, {0.5, 0.5}, 0.5);
  EXPECT_LE(err, 1e-12);
}

TEST(Covering, SelectionCoversSupportWithBoundedOverlap) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::mt19937_64 rng(seed);
    const Vec2 mean(uniform(rng, 0.4, 0.8), uniform(rng, 0.4, 0.8));
    const auto d = gaussian_density({0, 0}, 1.25, 1.25, 1.0 / 32, mean, 0.2, 100.0);
    const auto col = besicovitch_select(calibrated_candidates(d, 7.5), &d);
    const auto audit = audit_cover(col, d, support_of(d));
    EXPECT_TRUE(audit.covered);
    EXPECT_LE(audit.max_overlap, 16);
    for (std::size_t k = 0; k < col.squares.size(); ++k)
      EXPECT_LE(std::abs(col.masses[k] - 7.5), 2 * col.quadrature_errors[k]);
  }
}

TEST(Covering, SelectionOrderIsDeterministic) {
  std::vector<Square> cands{{{0.2, 0.2}, 0.3}, {{0.1, 0.9}, 0.3}, {{0.5, 0.5}, 0.5}, {{0.9, 0.1}, 0.1}};
  const auto a = besicovitch_select(cands);
  std::reverse(cands.begin(), cands.end());
  const auto b = besicovitch_select(cands);
  ASSERT_EQ(a.squares.size(), b.squares.size());
  for (std::size_t k = 0; k < a.squares.size(); ++k) {
    EXPECT_EQ(a.squares[k].center, b.squares[k].center);
    EXPECT_EQ(a.squares[k].side, b.squares[k].side);
  }
  EXPECT_EQ(a.squares.front().side, 0.5);
}

TEST(Covering, CsvRoundTrip) {
  const std::string text = "x,y,value\n0,0,1\n0.5,0,1\n0,0.5,1\n0.5,0.5,1\n";
  const auto d = density_from_csv(text);
  EXPECT_EQ(d.nx(), 2);
  EXPECT_EQ(d.ny(), 2);
  EXPECT_NEAR(d.total_mass(), 0.25, 1e-15);
  EXPECT_THROW(density_from_csv("0,0,1\n0.3,0,1\n1,0,1\n"), InvalidInput);
  EXPECT_THROW(density_from_csv("0,0,-1\n1,0,1\n0,1,1\n1,1,1\n"), InvalidInput);
}
