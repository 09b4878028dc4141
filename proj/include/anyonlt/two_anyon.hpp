#pragma once

// Two extended anyons in a square with Neumann boundary: link-phase
// discretization on the n^4 product grid, antisymmetric ground energy, the
// polynomial trial-state bound and statistics sweeps.

#include <cstddef>
#include <vector>

#include "anyonlt/eigensolver.hpp"
#include "anyonlt/model.hpp"

namespace anyonlt::two_anyon {

using linalg::CVector;
using linalg::Index;
using linalg::OperatorHandle;

struct TwoBodyGrid {
  int n_side = 20;
  model::AnyonParams params{0.0, 1e-3};
  model::SquareDomain domain = model::SquareDomain::unit();
  std::vector<model::Vec2> outside;
  model::EnergyMode mode = model::EnergyMode::kinetic_only;
  model::FluxWeight flux_weight = model::FluxWeight::unit;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;

  Index dim() const noexcept {
    const Index n = n_side;
    return n * n * n * n;
  }
  double spacing() const noexcept { return domain.side() / (n_side - 1); }
  /// Node (i1, j1) for particle 1 and (i2, j2) for particle 2.
  Index index(int i1, int j1, int i2, int j2) const noexcept {
    const Index n = n_side;
    return i1 + n * (j1 + n * (i2 + n * j2));
  }
  /// Throws InvalidInput on a bad grid, ResourceError if the estimated
  /// footprint exceeds the budget.
  void validate() const;
  std::size_t estimated_bytes() const noexcept;
};

/// Symmetric form of the quadratic part of the energy. Kinetic-only: the
/// magnetic kinetic form of both particles with weight 1. Full: weight 1/2
/// on the magnetic form plus 1/4 of the flux potential on the diagonal; the
/// modulus-gradient term is evaluated afterwards on the computed state.
OperatorHandle assemble_two_body(const TwoBodyGrid& grid);

/// Same grid with alpha = 0, no outside particles, kinetic-only: the free
/// two-particle Neumann operator used for the modulus term.
OperatorHandle assemble_free_two_body(const TwoBodyGrid& grid);

/// v -> (v - Swap v)/2 applied column-wise.
void antisymmetrize(const TwoBodyGrid& grid, linalg::CBlock& block);
/// ||(v + Swap v)/2|| / ||v||.
double antisymmetry_defect(const TwoBodyGrid& grid, const CVector& v);

struct SolveOptions {
  double tol = 1e-7;
  int max_iterations = 3000;
  std::uint64_t seed = 0x5eed;
};

struct TwoAnyonResult {
  double energy = 0.0;
  double quadratic_part = 0.0;  // eigenvalue of the assembled operator
  double modulus_term = 0.0;    // (1/4) <|u|, H_0 |u|> in full mode, else 0
  double residual = 0.0;
  double antisymmetry_defect = 0.0;
  int iterations = 0;
  CVector state;  // symmetric-form ground state, unit norm
};

TwoAnyonResult ground_energy(const TwoBodyGrid& grid, const SolveOptions& options = {});

/// Rayleigh quotient of the full discrete functional (or the kinetic form in
/// kinetic-only mode) for nodal values `psi`.
double discrete_functional(const TwoBodyGrid& grid, const CVector& psi);

/// Nodal samples of (x1 - x2) + (y1 - y2) on the grid.
CVector trial_state_samples(const TwoBodyGrid& grid);

struct TrialStateBound {
  double norm_squared = 0.0;    // int |psi_2|^2 over the square pair
  double displayed_chain = 0.0; // 2 int |(-i grad_1 + alpha A) psi_2|^2, unnormalized
  double raw_quotient = 0.0;    // displayed_chain / norm_squared
  double weighted_chain = 0.0;  // full weighted functional (1/2, 1/4, 1/4), unnormalized
};

/// Trial state psi_2 on the unit square pair by Gauss-Legendre quadrature in
/// polar coordinates of the relative position. `nodes` is the count per
/// direction on each smooth piece.
TrialStateBound trial_state_bound(const model::AnyonParams& params, int nodes = 64,
                                  model::FluxWeight flux_weight = model::FluxWeight::unit);

struct ProfilePoint {
  double alpha = 0.0;
  double energy = 0.0;
  double residual = 0.0;
};

struct AlphaProfile {
  std::vector<ProfilePoint> points;
  /// inf over alpha != 1 of E / |alpha - 1|.
  double infimum_ratio = 0.0;
};

/// Kinetic-only ground energies on the unit square at R = gamma for each alpha.
/// Independent solves run on up to `workers` threads.
AlphaProfile e2_alpha_profile(double gamma, int n_side, const std::vector<double>& alphas, int workers = 1,
                              const SolveOptions& options = {});

}  // namespace anyonlt::two_anyon
