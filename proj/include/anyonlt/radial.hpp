#pragma once

// Radial Neumann eigenproblem  -u'' - u'/r + nu^2 u / r^2 = lambda u  on
// [gamma, 1], Bessel derivative zeros, and the two-anyon lower-bound constant.

#include <vector>

namespace anyonlt::radial {

struct RadialOptions {
  int grid_points = 4096;
  /// Eigenvalues at or below this value are treated as the zero mode.
  double positivity_threshold = 1e-9;
  /// Upper end of the searched spectral window.
  double window_max = 1e6;
  /// Also solve on the doubled grid and report a Richardson error estimate.
  bool estimate_refinement = true;
};

struct RadialEigenResult {
  double lambda_min_positive = 0.0;  // g^2(nu, gamma)
  double g = 0.0;
  std::vector<double> radii;          // nodes on [gamma, 1]; empty on the plateau
  std::vector<double> eigenfunction;  // normalized in the r dr inner product
  double refinement_estimate = 0.0;
  bool plateau = false;
};

/// g^2(nu, gamma): the smallest positive Neumann eigenvalue, or exactly nu^2 for gamma >= 1.
RadialEigenResult g_squared(double nu, double gamma, const RadialOptions& options = {});

/// J_nu'(x) by its power series.
double bessel_j_prime(double nu, double x);

/// First positive zero of J_nu' (the trivial zero of J_0' at the origin is excluded).
double bessel_jprime_zero(double nu);

/// min over p in {0..N-2}, q in Z of |(2p+1)(1-alpha) - 2q|.
double alpha_fraction(int particle_count, double alpha);

/// (pi/48) g^2(c_inner alpha_2, 12 gamma) (1 - 12 gamma)_+^3.
double e2_lower_constant(double alpha, double gamma, double c_inner = 1.0,
                         const RadialOptions& options = {});

/// Discrete operator in symmetric form on the log-radius grid; used by tests
/// to check self-adjointness in the r dr inner product.
struct RadialMatrices {
  std::vector<double> radii;
  std::vector<double> stiffness_diag, stiffness_off;  // K (tridiagonal)
  std::vector<double> mass;                           // lumped r dr weights
};
RadialMatrices assemble_radial(double nu, double gamma, int grid_points);

}  // namespace anyonlt::radial
