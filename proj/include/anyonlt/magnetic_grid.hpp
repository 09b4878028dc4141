#pragma once

// Link-phase magnetic Neumann Laplacian on a uniform square grid, its low
// spectrum, eigenvalue counting, Green functions and the diamagnetic check.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "anyonlt/eigensolver.hpp"

namespace anyonlt::magnetic {

using linalg::Index;
using linalg::OperatorHandle;
using linalg::Spectrum;

/// Vertex grid on [0, side]^2 with one phase per edge. Node (i, j) has flat
/// index i + n j. Horizontal edge (i,j)-(i+1,j) sits at i + (n-1) j, vertical
/// edge (i,j)-(i,j+1) at i + n j. A phase is the line integral of A from the
/// lower-index node to the higher one.
struct LinkGrid2D {
  int n_side = 0;
  double side = 1.0;
  std::vector<double> phase_x;
  std::vector<double> phase_y;

  static LinkGrid2D zero_field(int n_side, double side = 1.0);

  double spacing() const noexcept { return side / (n_side - 1); }
  Index node(int i, int j) const noexcept { return i + static_cast<Index>(n_side) * j; }
  Index dim() const noexcept { return static_cast<Index>(n_side) * n_side; }
  /// Throws InvalidInput unless the phase arrays have n(n-1) finite entries.
  void validate() const;

  /// Copy with phases theta_vw + phi_v - phi_w, unitarily equivalent to this one.
  LinkGrid2D gauge_transformed(std::span<const double> node_potential) const;
};

/// Trapezoid weight of grid line `i` out of `n` (1/2 on the boundary).
inline double line_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

/// 1-D Neumann operator w^{-1/2} k w^{-1/2} / h^2 whose Kronecker sum is the
/// zero-field operator.
Eigen::MatrixXd neumann_line_operator(int n_side, double side);

/// Symmetric form S = M^{-1/2} K M^{-1/2} of the quadratic form
/// sum_edges c_e |psi_v - e^{i theta_vw} psi_w|^2 with lumped mass h^2 w_i w_j.
OperatorHandle assemble_magnetic_laplacian(const LinkGrid2D& grid);

/// Lowest k eigenpairs, preconditioned by a sparse LDL^T factorization of
/// S + 1 (gauge covariant, unlike a zero-field inverse).
Spectrum lowest_eigenvalues(const OperatorHandle& op, int k, double tol = 1e-8, std::uint64_t seed = 0x5eed);

/// N(Lambda): number of eigenvalues <= Lambda, found by requesting eigenvalues
/// until one exceeds Lambda.
int count_below(const OperatorHandle& op, double lambda, double tol = 1e-8);

/// Same count from the inertia of a dense pivoted LDL^T of S - Lambda.
int count_below_inertia(const OperatorHandle& op, double lambda);

struct GreenSample {
  Index source_index = 0;
  double shift_e = 0.0;
  std::vector<linalg::Complex> values;  // nodal values of G
};

/// Solves (H + e) G = delta_source with the delta normalized to unit mass.
GreenSample green_function(const OperatorHandle& op, double e, Index source);
/// Several sources sharing one factorization.
std::vector<GreenSample> green_functions(const OperatorHandle& op, double e, std::span<const Index> sources);

/// f(Lambda) = Lambda^m sum_{j,k>=0} (pi^2 (j^2+k^2) + e)^{-m}, e = Lambda - lambda_target > 0,
/// summed until the tail bound drops below 1e-10 of the partial sum.
double birman_schwinger_bound(double lambda, double lambda_target, int m = 2);

/// Magnetic field sampled on [0, side]^2.
using FieldFunction = std::function<double(double, double)>;

FieldFunction constant_field(double b);
/// Sum of 16 random cosine modes, scaled so |B| <= amplitude everywhere.
FieldFunction random_smooth_field(double amplitude, std::uint64_t seed);

/// Phases whose curl is the field: Dirichlet Poisson solve Delta phi = B,
/// A = grad-perp phi (normal component zero on the boundary), midpoint rule on edges.
LinkGrid2D phases_from_field(const FieldFunction& field, int n_side, double side = 1.0);

struct DiamagneticReport {
  double max_violation = 0.0;  // max over nodes and sources of |G^A| - G^0
  double lambda1_field = 0.0;
  double lambda1_free = 0.0;
  double lambda1_gap() const noexcept { return lambda1_field - lambda1_free; }
};

DiamagneticReport diamagnetic_check(const FieldFunction& field, int n_side, double e,
                                    std::span<const Index> sources, double tol = 1e-9);

}  // namespace anyonlt::magnetic
