#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "anyonlt/eigensolver.hpp"
#include "anyonlt/error.hpp"
#include "anyonlt/magnetic_grid.hpp"

using namespace anyonlt;
using namespace anyonlt::magnetic;
using linalg::CVector;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

std::vector<double> random_potential(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> phi(static_cast<std::size_t>(n) * n);
  for (auto& p : phi) p = 20.0 * static_cast<double>(rng() >> 11) * 0x1p-53;
  return phi;
}

}  // namespace

TEST(Magnetic, HermitianOnRandomVectors) {
  const auto op = assemble_magnetic_laplacian(phases_from_field(random_smooth_field(30.0, 1), 20));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  CVector u(op.dim()), v(op.dim());
  for (Index i = 0; i < op.dim(); ++i) {
    u(i) = {N(rng), N(rng)};
    v(i) = {N(rng), N(rng)};
  }
  const auto lhs = op.apply(u).dot(v), rhs = u.dot(op.apply(v));
  EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)));
}

TEST(Magnetic, LobpcgMatchesDenseOracle) {
  const auto op = assemble_magnetic_laplacian(phases_from_field(random_smooth_field(40.0, 3), 16));
  const auto dense = linalg::dense_lowest_eigenvalues(op, 5);
  const auto it = lowest_eigenvalues(op, 5, 1e-10);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(it.eigenvalues[i], dense.eigenvalues[i], 1e-9 * (1 + dense.eigenvalues[i]));
}

TEST(Magnetic, FreeSpectrumAndSecondOrderConvergence) {
  std::vector<double> err;
  for (const int n : {17, 33, 65}) {
    const auto s = lowest_eigenvalues(assemble_magnetic_laplacian(LinkGrid2D::zero_field(n)), 4, 1e-10);
    EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-9);
    err.push_back(std::abs(s.eigenvalues[1] - kPi2));
    EXPECT_NEAR(s.eigenvalues[1], s.eigenvalues[2], 1e-8);
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.8);
}

TEST(Magnetic, GaugeInvariantSpectrum) {
  const auto grid = phases_from_field(random_smooth_field(50.0, 4), 33);
  const auto a = lowest_eigenvalues(assemble_magnetic_laplacian(grid), 4, 1e-10);
  const auto b = lowest_eigenvalues(assemble_magnetic_laplacian(grid.gauge_transformed(random_potential(33, 5))), 4, 1e-10);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-10);
}

TEST(Magnetic, PlaquetteFluxMatchesField) {
  const int n = 33;
  const double b = 7.0;
  const auto g = phases_from_field(constant_field(b), n);
  const double h = g.spacing();
  // Circulation around interior cells away from the boundary stencil.
  for (int j = 3; j < n - 4; ++j)
    for (int i = 3; i < n - 4; ++i) {
      const double circ = g.phase_x[i + (n - 1) * j] + g.phase_y[(i + 1) + n * j] - g.phase_x[i + (n - 1) * (j + 1)] -
                          g.phase_y[i + n * j];
      EXPECT_NEAR(circ, b * h * h, 1e-9) << i << ',' << j;
    }
}

TEST(Magnetic, GreenFunctionSolvesShiftedSystem) {
  const auto op = assemble_magnetic_laplacian(phases_from_field(random_smooth_field(20.0, 6), 17));
  const Index src = 40;
  const auto g = green_function(op, 1.0, src);
  CVector x(op.dim());
  for (Index i = 0; i < op.dim(); ++i) x(i) = g.values[static_cast<std::size_t>(i)] * std::sqrt(op.mass()(i));
  CVector r = op.apply(x) + x;
  for (Index i = 0; i < op.dim(); ++i) r(i) *= std::sqrt(op.mass()(i));
  r(src) -= 1.0;
  EXPECT_LT(r.norm(), 1e-10);
}

TEST(Magnetic, DiamagneticInequalityOnSmallGrids) {
  const Index sources[] = {0, 50, 144, 288};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = diamagnetic_check(random_smooth_field(50.0, seed), 17, 1.0, sources);
    EXPECT_LE(r.max_violation, 1e-10);
    EXPECT_GE(r.lambda1_field, -1e-9);
    EXPECT_GE(r.lambda1_gap(), -1e-9);
  }
}

TEST(Magnetic, CountingAgreesWithInertiaAndBirmanSchwinger) {
  const double bound = birman_schwinger_bound(2.0, 1.5, 2);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto op = assemble_magnetic_laplacian(phases_from_field(random_smooth_field(50.0, seed), 24));
    const int lobpcg = count_below(op, 30.0);
    EXPECT_EQ(lobpcg, count_below_inertia(op, 30.0));
    EXPECT_LE(count_below(op, 2.0), bound);
  }
  const auto free_op = assemble_magnetic_laplacian(LinkGrid2D::zero_field(24));
  EXPECT_EQ(count_below(free_op, 2.0), 1);
  EXPECT_LE(count_below(free_op, 2.0), bound);
}

TEST(Magnetic, BirmanSchwingerSum) {
  // Partial sums of Lambda^m sum (pi^2 (j^2 + k^2) + e)^-m bracket the value.
  const double lambda = 2.0, e = 0.5;
  double partial = 0.0;
  for (int j = 0; j < 400; ++j)
    for (int k = 0; k < 400; ++k) partial += std::pow(lambda / (kPi2 * (j * j + k * k) + e), 2);
  const double f = birman_schwinger_bound(lambda, lambda - e, 2);
  EXPECT_GE(f, partial - 1e-12);
  EXPECT_NEAR(f, partial, 1e-6);
  EXPECT_GT(birman_schwinger_bound(2.0, 1.9, 2), f);
  EXPECT_THROW(birman_schwinger_bound(2.0, 2.0, 2), InvalidInput);
}

TEST(Magnetic, RejectsBadGrids) {
  LinkGrid2D g = LinkGrid2D::zero_field(8);
  g.phase_x.pop_back();
  EXPECT_THROW(g.validate(), InvalidInput);
  EXPECT_THROW(LinkGrid2D::zero_field(1), InvalidInput);
}
