#pragma once

// Mass-calibrated squares over a sampled density and a greedy
// bounded-overlap selection with an exact per-node audit.

#include <cstdint>
#include <string>
#include <vector>

#include "anyonlt/model.hpp"

namespace anyonlt::covering {

using model::Vec2;

/// Nonnegative samples on a uniform grid over [origin, origin + h (nx-1, ny-1)].
/// Node (i, j) has flat index i + nx j. The density between nodes is the
/// bilinear interpolant and zero outside the box.
class DensityGrid {
 public:
  DensityGrid(Vec2 origin, double spacing, int nx, int ny, std::vector<double> values);

  const Vec2& origin() const noexcept { return origin_; }
  double spacing() const noexcept { return h_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double value(int i, int j) const { return values_[static_cast<std::size_t>(i + nx_ * j)]; }
  const std::vector<double>& values() const noexcept { return values_; }
  Vec2 node(int i, int j) const { return origin_ + Vec2(h_ * i, h_ * j); }
  Vec2 box_max() const { return node(nx_ - 1, ny_ - 1); }

  /// Exact integral of the interpolant over [lo, hi] (clipped to the box).
  double mass_in(const Vec2& lo, const Vec2& hi) const;
  double total_mass() const;
  /// Every other node; spacing 2h. Requires odd nx and ny.
  DensityGrid subsampled() const;

 private:
  Vec2 origin_;
  double h_;
  int nx_, ny_;
  std::vector<double> values_;
};

struct Square {
  Vec2 center;
  double side = 0.0;

  bool contains(const Vec2& x) const noexcept {
    return std::abs(x.x() - center.x()) <= 0.5 * side && std::abs(x.y() - center.y()) <= 0.5 * side;
  }
};

/// Integral of the density over the axis-aligned square.
double square_mass(const DensityGrid& density, const Vec2& center, double side);

/// Smallest side whose centered square carries at least `target_mass`.
double calibrated_square(const DensityGrid& density, const Vec2& center, double target_mass);

/// |mass on the grid - mass on the 2h subsample| for the same square, plus a
/// rounding floor of 64 eps times the mass.
double quadrature_error(const DensityGrid& density, const Vec2& center, double side);

struct CoveringCollection {
  std::vector<Square> squares;
  std::vector<double> masses;             // per square, filled when a density is given
  std::vector<double> quadrature_errors;  // per square, filled when a density is given
  std::vector<int> overlap_histogram;     // per grid node: number of squares containing it
};

/// Greedy selection: candidates in order of decreasing side (ties by
/// lexicographic center), keeping each one whose center is not yet covered.
/// With a density the masses and the per-node overlap counts are filled in.
CoveringCollection besicovitch_select(const std::vector<Square>& candidates, const DensityGrid* density = nullptr);

struct CoverAudit {
  bool covered = true;
  int max_overlap = 0;
  std::size_t uncovered_nodes = 0;
};

/// Checks 1 <= sum_Q 1_Q on every support node and reports max sum_Q 1_Q there.
CoverAudit audit_cover(const CoveringCollection& collection, const DensityGrid& grid,
                       const std::vector<bool>& support_mask);

/// Nodes with positive density.
std::vector<bool> support_of(const DensityGrid& density);

/// Calibrated candidate at every support node, target (n_lower + n_upper)/2.
std::vector<Square> calibrated_candidates(const DensityGrid& density, double target_mass);

// Built-in densities on [x0, x0 + width] x [y0, y0 + height], scaled so the
// interpolant carries `total_mass`.
DensityGrid uniform_density(Vec2 origin, double width, double height, double spacing, double total_mass);
DensityGrid gaussian_density(Vec2 origin, double width, double height, double spacing, const Vec2& mean,
                             double sigma, double total_mass);
DensityGrid two_bump_density(Vec2 origin, double width, double height, double spacing, double total_mass);

/// Amplitude of the continuous Gaussian A exp(-|x - mean|^2 / (2 sigma^2))
/// sampled by gaussian_density, and its exact mass over a rectangle.
double gaussian_amplitude(const DensityGrid& density, const Vec2& mean, double sigma);
double gaussian_rectangle_mass(double amplitude, const Vec2& mean, double sigma, const Vec2& lo, const Vec2& hi);

/// Reads "x,y,value" rows (optional header) on a uniform grid.
DensityGrid density_from_csv(const std::string& text);

}  // namespace anyonlt::covering
