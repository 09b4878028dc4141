#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "anyonlt/error.hpp"
#include "anyonlt/magnetic_grid.hpp"
#include "anyonlt/two_anyon.hpp"

using namespace anyonlt;
using namespace anyonlt::two_anyon;

namespace {

TwoBodyGrid small_grid(double alpha, int n = 10, double radius = 0.05) {
  TwoBodyGrid g;
  g.n_side = n;
  g.params = model::AnyonParams(alpha, radius);
  return g;
}

CVector random_vector(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = {N(rng), N(rng)};
  return v;
}

}  // namespace

TEST(TwoAnyon, ProjectorIsIdempotentAndAntisymmetric) {
  const auto g = small_grid(0.5);
  linalg::CBlock b = random_vector(g.dim(), 1);
  antisymmetrize(g, b);
  EXPECT_LT(antisymmetry_defect(g, b.col(0)), 1e-15);
  linalg::CBlock c = b;
  antisymmetrize(g, c);
  EXPECT_LT((c - b).norm(), 1e-14 * b.norm());
}

TEST(TwoAnyon, OperatorHermitianAndCommutesWithSwap) {
  for (const auto mode : {model::EnergyMode::kinetic_only, model::EnergyMode::full}) {
    auto g = small_grid(0.7);
    g.mode = mode;
    g.outside = {{1.3, 0.5}};
    const auto op = assemble_two_body(g);
    const CVector u = random_vector(g.dim(), 2), v = random_vector(g.dim(), 3);
    const auto lhs = op.apply(u).dot(v), rhs = u.dot(op.apply(v));
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::abs(lhs));
    linalg::CBlock a = u;
    antisymmetrize(g, a);
    linalg::CBlock Sa = op.apply(CVector(a.col(0)));
    EXPECT_LT(antisymmetry_defect(g, Sa.col(0)), 1e-12);
  }
}

TEST(TwoAnyon, FreeEnergyEqualsFirstExcitedLineEigenvalue) {
  // At alpha = 0 the antisymmetric ground state pairs the constant mode with
  // the first excited single-particle mode, whose eigenvalue is the lowest
  // nonzero eigenvalue of the 1-D Neumann operator.
  const int n = 10;
  const auto g = small_grid(0.0, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(magnetic::neumann_line_operator(n, 1.0));
  const auto r = ground_energy(g);
  EXPECT_NEAR(r.energy, es.eigenvalues()(1), 1e-7);
  EXPECT_LE(r.antisymmetry_defect, 1e-10);
}

TEST(TwoAnyon, GroundStateConsistentWithFunctional) {
  for (const double alpha : {0.3, 1.0, 1.6}) {
    const auto g = small_grid(alpha);
    const auto r = ground_energy(g);
    EXPECT_GE(r.energy, -1e-6);
    EXPECT_LE(r.antisymmetry_defect, 1e-10);
    // Nodal values from the symmetric-form state.
    const auto op = assemble_two_body(g);
    CVector psi = r.state;
    for (Index i = 0; i < psi.size(); ++i) psi(i) /= std::sqrt(op.mass()(i));
    EXPECT_NEAR(discrete_functional(g, psi), r.energy, 1e-6 * (1 + r.energy));
  }
}

TEST(TwoAnyon, VariationalUpperBoundByTrialState) {
  for (const double alpha : {0.0, 0.5, 1.5}) {
    const auto g = small_grid(alpha, 12);
    const auto r = ground_energy(g);
    EXPECT_LE(r.energy, discrete_functional(g, trial_state_samples(g)) + 1e-8);
  }
}

TEST(TwoAnyon, ScalingLawIsExactOnTheGrid) {
  auto unit = small_grid(0.5, 10, 0.05);
  auto big = small_grid(0.5, 10, 0.1);
  big.domain = model::SquareDomain(model::Vec2::Zero(), 2.0);
  EXPECT_NEAR(4.0 * ground_energy(big).energy, ground_energy(unit).energy, 1e-6);
}

TEST(TwoAnyon, FullModeAddsModulusTerm) {
  auto g = small_grid(0.5);
  g.mode = model::EnergyMode::full;
  const auto r = ground_energy(g);
  EXPECT_GE(r.modulus_term, 0.0);
  EXPECT_NEAR(r.energy, r.quadratic_part + r.modulus_term, 1e-12);
}

TEST(TwoAnyon, TrialStateHandComputedValues) {
  // psi = (x1 - x2) + (y1 - y2): |psi|^2 integrates to 1/6 + 1/6, and at
  // alpha = 0 the chain is 2 |grad_1 psi|^2 = 4.
  const auto t = trial_state_bound(model::AnyonParams(0.0, 0.1));
  EXPECT_NEAR(t.norm_squared, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(t.displayed_chain, 4.0, 1e-12);
  EXPECT_NEAR(t.raw_quotient, 12.0, 1e-11);
  for (const double alpha : {0.0, 0.5, 1.0, 1.5, 2.0})
    for (const double radius : {0.01, 0.1, 1.0}) {
      const model::AnyonParams p(alpha, radius);
      const auto a = trial_state_bound(p, 48), b = trial_state_bound(p, 96);
      EXPECT_NEAR(a.weighted_chain, b.weighted_chain, 1e-6);
      EXPECT_LE(b.weighted_chain, 8.0);
      if (alpha <= 1.0) EXPECT_LE(b.displayed_chain, 8.0);
    }
}

TEST(TwoAnyon, RejectsBadGrids) {
  auto g = small_grid(0.5, 4);
  EXPECT_THROW(g.validate(), InvalidInput);
  auto big = small_grid(0.5, 60);
  big.memory_budget_bytes = 1 << 20;
  EXPECT_THROW(big.validate(), ResourceError);
  auto inside = small_grid(0.5);
  inside.outside = {{0.5, 0.5}};
  EXPECT_THROW(inside.validate(), InvalidInput);
}
