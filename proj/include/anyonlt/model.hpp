#pragma once

// Extended-anyon model primitives: regularized distance, smeared Coulomb
// potential, pair gauge field, smeared-flux potential and the split local
// energy densities.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace anyonlt::model {

using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;
using CVec2 = Eigen::Vector2cd;

/// Rotation by +pi/2: (x, y) -> (-y, x).
inline Vec2 perp(const Vec2& x) { return {-x.y(), x.x()}; }

/// Statistics parameter alpha in [0, 2] (fermionic convention) and flux radius R > 0.
class AnyonParams {
 public:
  AnyonParams(double alpha, double radius);

  double alpha() const noexcept { return alpha_; }
  double radius() const noexcept { return radius_; }

 private:
  double alpha_;
  double radius_;
};

/// Closed axis-aligned square [corner, corner + side]^2.
class SquareDomain {
 public:
  SquareDomain(Vec2 corner, double side);
  static SquareDomain unit() { return SquareDomain(Vec2::Zero(), 1.0); }

  const Vec2& corner() const noexcept { return corner_; }
  double side() const noexcept { return side_; }
  double area() const noexcept { return side_ * side_; }
  double gamma(double radius) const noexcept { return radius / side_; }
  bool contains(const Vec2& x) const noexcept;

 private:
  Vec2 corner_;
  double side_;
};

/// n particles inside the square and m fixed particles outside it.
class Configuration {
 public:
  Configuration(SquareDomain square, std::vector<Vec2> inside, std::vector<Vec2> outside = {});

  const SquareDomain& square() const noexcept { return square_; }
  const std::vector<Vec2>& inside() const noexcept { return inside_; }
  const std::vector<Vec2>& outside() const noexcept { return outside_; }
  std::size_t n() const noexcept { return inside_.size(); }
  std::size_t m() const noexcept { return outside_.size(); }

  /// Same configuration with inside particle `j` moved (kept inside the square).
  Configuration with_particle(std::size_t j, const Vec2& position) const;

 private:
  SquareDomain square_;
  std::vector<Vec2> inside_;
  std::vector<Vec2> outside_;
};

/// Weighted local energy densities. Full mode carries weights 1/2, 1/4, 1/4.
struct EnergyBreakdown {
  double e1 = 0.0;
  double e2_grad = 0.0;
  double e2_pot = 0.0;

  double total() const noexcept { return e1 + e2_grad + e2_pot; }
};

enum class EnergyMode { full, kinetic_only };

/// Multiplier of the smeared-flux term. `unit` keeps the printed weight 1,
/// `alpha` multiplies the term by the statistics parameter.
enum class FluxWeight { unit, alpha };

double flux_factor(FluxWeight weight, double alpha) noexcept;

/// |x|_R = max(|x|, R).
double regularized_distance(const Vec2& x, double radius);

/// Potential of a unit charge spread uniformly over the disk of radius R:
/// log|x| outside, log R + (|x|^2/R^2 - 1)/2 inside.
double smeared_coulomb(const Vec2& x, double radius);

/// x_perp / |x|_R^2, the gradient-perp of the smeared potential. Zero at x = 0.
Vec2 pair_kernel(const Vec2& x, double radius);

/// Gauge field felt by inside particle `j` (0-based) from every other inside
/// particle and every outside particle.
Vec2 vector_potential(std::size_t j, const Configuration& config, double radius);

/// Same field evaluated at an arbitrary point `x` for particle `j`, i.e. with
/// particle j displaced to x. Used for edge-midpoint phases.
Vec2 vector_potential_at(const Vec2& x, std::size_t j, const Configuration& config, double radius);

/// Smeared-flux potential felt by particle `j`: 2/R^2 times the number of
/// other particles (inside or outside) within distance R.
double flux_potential(std::size_t j, const Configuration& config, double radius);

/// Point sample of a wavefunction: value and per-particle complex gradients.
struct StateSample {
  Complex psi;
  std::vector<CVec2> gradients;  // one per inside particle
};

struct EnergyOptions {
  EnergyMode mode = EnergyMode::full;
  FluxWeight flux_weight = FluxWeight::unit;
};

/// Energy densities at one configuration point.
EnergyBreakdown energy_density(const StateSample& sample, const Configuration& config,
                               const AnyonParams& params, const EnergyOptions& options = {});

/// Batched evaluation over sample points; `samples` and `configs` must align.
std::vector<EnergyBreakdown> energy_density(std::span<const StateSample> samples,
                                            std::span<const Configuration> configs,
                                            const AnyonParams& params,
                                            const EnergyOptions& options = {});

}  // namespace anyonlt::model
