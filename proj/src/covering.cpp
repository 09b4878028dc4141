#include "anyonlt/covering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "anyonlt/error.hpp"

namespace anyonlt::covering {

namespace {

// Antiderivative of the unit hat function max(0, 1 - |u|).
double hat_antiderivative(double u) {
  if (u <= -1.0) return 0.0;
  if (u <= 0.0) return 0.5 * (u + 1.0) * (u + 1.0);
  if (u <= 1.0) return 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
  return 1.0;
}

// Integrals over [a, b] (inside the axis) of the hat functions of nodes first..last.
void hat_integrals(double origin, double h, int n, double a, double b, int& first, int& last,
                   std::vector<double>& out) {
  first = std::max(0, static_cast<int>(std::floor((a - origin) / h)));
  last = std::min(n - 1, static_cast<int>(std::ceil((b - origin) / h)));
  out.assign(static_cast<std::size_t>(std::max(0, last - first + 1)), 0.0);
  for (int i = first; i <= last; ++i) {
    const double xi = origin + h * i;
    out[static_cast<std::size_t>(i - first)] = h * (hat_antiderivative((b - xi) / h) - hat_antiderivative((a - xi) / h));
  }
}

}  // namespace

DensityGrid::DensityGrid(Vec2 origin, double spacing, int nx, int ny, std::vector<double> values)
    : origin_(std::move(origin)), h_(spacing), nx_(nx), ny_(ny), values_(std::move(values)) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidInput("grid spacing must be positive");
  if (nx < 2 || ny < 2) throw InvalidInput("density grid needs at least 2 nodes per axis");
  if (values_.size() != static_cast<std::size_t>(nx) * ny) throw InvalidInput("density has the wrong number of samples");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("density samples must be finite and nonnegative");
  }
}

double DensityGrid::mass_in(const Vec2& lo, const Vec2& hi) const {
  const Vec2 top = box_max();
  const double a = std::max(lo.x(), origin_.x()), b = std::min(hi.x(), top.x());
  const double c = std::max(lo.y(), origin_.y()), d = std::min(hi.y(), top.y());
  if (!(b > a) || !(d > c)) return 0.0;
  int i0, i1, j0, j1;
  std::vector<double> hx, hy;
  hat_integrals(origin_.x(), h_, nx_, a, b, i0, i1, hx);
  hat_integrals(origin_.y(), h_, ny_, c, d, j0, j1, hy);
  double total = 0.0;
  for (int j = j0; j <= j1; ++j) {
    const double wy = hy[static_cast<std::size_t>(j - j0)];
    if (wy == 0.0) continue;
    const double* row = values_.data() + static_cast<std::size_t>(nx_) * j;
    double line = 0.0;
    for (int i = i0; i <= i1; ++i) line += hx[static_cast<std::size_t>(i - i0)] * row[i];
    total += wy * line;
  }
  return total;
}

double DensityGrid::total_mass() const { return mass_in(origin_, box_max()); }

DensityGrid DensityGrid::subsampled() const {
  if (nx_ % 2 == 0 || ny_ % 2 == 0 || nx_ < 3 || ny_ < 3) {
    throw InvalidInput("subsampling needs an odd node count of at least 3 per axis");
  }
  const int mx = (nx_ + 1) / 2, my = (ny_ + 1) / 2;
  std::vector<double> v(static_cast<std::size_t>(mx) * my);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) v[static_cast<std::size_t>(i + mx * j)] = value(2 * i, 2 * j);
  }
  return DensityGrid(origin_, 2.0 * h_, mx, my, std::move(v));
}

double square_mass(const DensityGrid& density, const Vec2& center, double side) {
  if (!(side >= 0.0)) throw InvalidInput("side must be nonnegative");
  const Vec2 half(0.5 * side, 0.5 * side);
  return density.mass_in(center - half, center + half);
}

double calibrated_square(const DensityGrid& density, const Vec2& center, double target_mass) {
  if (!(target_mass > 0.0) || !std::isfinite(target_mass)) throw InvalidInput("target mass must be positive");
  const Vec2 lo = density.origin(), hi = density.box_max();
  const double reach = std::max({std::abs(center.x() - lo.x()), std::abs(center.x() - hi.x()),
                                 std::abs(center.y() - lo.y()), std::abs(center.y() - hi.y())});
  double upper = 2.0 * reach;
  const double total = density.total_mass();
  // rounding slack only matters when the whole mass is requested
  const double slack = target_mass >= total * (1.0 - 1e-12) ? 1e-12 * total : 0.0;
  if (square_mass(density, center, upper) < target_mass - slack) {
    std::ostringstream msg;
    msg << "target mass " << target_mass << " exceeds the mass " << square_mass(density, center, upper)
        << " reachable from (" << center.x() << ", " << center.y() << ")";
    throw UnreachableMass(msg.str());
  }
  double lower = 0.0;
  for (int it = 0; it < 200 && upper - lower > 4e-16 * upper; ++it) {
    const double mid = 0.5 * (lower + upper);
    if (square_mass(density, center, mid) >= target_mass - slack) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  return upper;
}

double quadrature_error(const DensityGrid& density, const Vec2& center, double side) {
  const DensityGrid coarse = density.subsampled();
  const double fine = square_mass(density, center, side);
  // plus a floor for rounding in the summation itself
  return std::abs(fine - square_mass(coarse, center, side)) + 64.0 * std::numeric_limits<double>::epsilon() * fine;
}

CoveringCollection besicovitch_select(const std::vector<Square>& candidates, const DensityGrid* density) {
  if (candidates.empty()) throw InvalidInput("no candidate squares");
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Square& p = candidates[a];
    const Square& q = candidates[b];
    if (p.side != q.side) return p.side > q.side;
    if (p.center.x() != q.center.x()) return p.center.x() < q.center.x();
    return p.center.y() < q.center.y();
  });

  CoveringCollection out;
  for (std::size_t idx : order) {
    const Square& c = candidates[idx];
    const bool covered = std::any_of(out.squares.begin(), out.squares.end(),
                                     [&](const Square& s) { return s.contains(c.center); });
    if (!covered) out.squares.push_back(c);
  }

  if (density) {
    const bool can_estimate = density->nx() % 2 == 1 && density->ny() % 2 == 1;
    for (const Square& s : out.squares) {
      out.masses.push_back(square_mass(*density, s.center, s.side));
      out.quadrature_errors.push_back(can_estimate ? quadrature_error(*density, s.center, s.side) : 0.0);
    }
    out.overlap_histogram.assign(static_cast<std::size_t>(density->nx()) * density->ny(), 0);
    for (int j = 0; j < density->ny(); ++j) {
      for (int i = 0; i < density->nx(); ++i) {
        const Vec2 x = density->node(i, j);
        int count = 0;
        for (const Square& s : out.squares) count += s.contains(x) ? 1 : 0;
        out.overlap_histogram[static_cast<std::size_t>(i + density->nx() * j)] = count;
      }
    }
  }
  return out;
}

CoverAudit audit_cover(const CoveringCollection& collection, const DensityGrid& grid,
                       const std::vector<bool>& support_mask) {
  const std::size_t nodes = static_cast<std::size_t>(grid.nx()) * grid.ny();
  if (support_mask.size() != nodes) throw InvalidInput("support mask has the wrong size");
  CoverAudit audit;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const std::size_t k = static_cast<std::size_t>(i + grid.nx() * j);
      if (!support_mask[k]) continue;
      const Vec2 x = grid.node(i, j);
      int count = 0;
      for (const Square& s : collection.squares) count += s.contains(x) ? 1 : 0;
      if (count == 0) {
        audit.covered = false;
        ++audit.uncovered_nodes;
      }
      audit.max_overlap = std::max(audit.max_overlap, count);
    }
  }
  return audit;
}

std::vector<bool> support_of(const DensityGrid& density) {
  std::vector<bool> mask(density.values().size());
  for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = density.values()[k] > 0.0;
  return mask;
}

std::vector<Square> calibrated_candidates(const DensityGrid& density, double target_mass) {
  std::vector<Square> out;
  for (int j = 0; j < density.ny(); ++j) {
    for (int i = 0; i < density.nx(); ++i) {
      if (!(density.value(i, j) > 0.0)) continue;
      const Vec2 c = density.node(i, j);
      out.push_back({c, calibrated_square(density, c, target_mass)});
    }
  }
  return out;
}

namespace {

int node_count(double length, double spacing) {
  const double steps = length / spacing;
  const long rounded = std::lround(steps);
  if (std::abs(steps - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, steps)) {
    throw InvalidInput("box length must be a whole multiple of the spacing");
  }
  return static_cast<int>(rounded) + 1;
}

DensityGrid sampled(Vec2 origin, double width, double height, double spacing, double total_mass,
                    const std::function<double(const Vec2&)>& f) {
  if (!(total_mass > 0.0)) throw InvalidInput("total mass must be positive");
  const int nx = node_count(width, spacing), ny = node_count(height, spacing);
  std::vector<double> v(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) v[static_cast<std::size_t>(i + nx * j)] = f(origin + Vec2(spacing * i, spacing * j));
  }
  DensityGrid unit(origin, spacing, nx, ny, v);
  const double scale = total_mass / unit.total_mass();
  for (auto& x : v) x *= scale;
  return DensityGrid(origin, spacing, nx, ny, std::move(v));
}

double gaussian_shape(const Vec2& x, const Vec2& mean, double sigma) {
  return std::exp(-(x - mean).squaredNorm() / (2.0 * sigma * sigma));
}

}  // namespace

DensityGrid uniform_density(Vec2 origin, double width, double height, double spacing, double total_mass) {
  return sampled(origin, width, height, spacing, total_mass, [](const Vec2&) { return 1.0; });
}

DensityGrid gaussian_density(Vec2 origin, double width, double height, double spacing, const Vec2& mean,
                             double sigma, double total_mass) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  return sampled(origin, width, height, spacing, total_mass,
                 [&](const Vec2& x) { return gaussian_shape(x, mean, sigma); });
}

DensityGrid two_bump_density(Vec2 origin, double width, double height, double spacing, double total_mass) {
  const Vec2 a = origin + Vec2(0.3 * width, 0.35 * height);
  const Vec2 b = origin + Vec2(0.7 * width, 0.65 * height);
  const double s = 0.12 * std::min(width, height);
  return sampled(origin, width, height, spacing, total_mass,
                 [&](const Vec2& x) { return gaussian_shape(x, a, s) + 0.6 * gaussian_shape(x, b, 0.8 * s); });
}

double gaussian_amplitude(const DensityGrid& density, const Vec2& mean, double sigma) {
  // generators scale the samples uniformly, so any positive node recovers A
  double best = 0.0, amplitude = 0.0;
  for (int j = 0; j < density.ny(); ++j) {
    for (int i = 0; i < density.nx(); ++i) {
      const double shape = gaussian_shape(density.node(i, j), mean, sigma);
      if (shape > best) {
        best = shape;
        amplitude = density.value(i, j) / shape;
      }
    }
  }
  return amplitude;
}

double gaussian_rectangle_mass(double amplitude, const Vec2& mean, double sigma, const Vec2& lo, const Vec2& hi) {
  auto axis = [&](double a, double b, double m) {
    const double s = sigma * std::numbers::sqrt2;
    return 0.5 * sigma * std::sqrt(2.0 * std::numbers::pi) * (std::erf((b - m) / s) - std::erf((a - m) / s));
  };
  if (!(hi.x() > lo.x()) || !(hi.y() > lo.y())) return 0.0;
  return amplitude * axis(lo.x(), hi.x(), mean.x()) * axis(lo.y(), hi.y(), mean.y());
}

DensityGrid density_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::array<double, 3>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::array<double, 3> r{};
    if (!(fields >> r[0] >> r[1] >> r[2])) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw InvalidInput("density CSV line " + std::to_string(line_no) + " is not 'x,y,value'");
    }
    rows.push_back(r);
  }
  if (rows.size() < 4) throw InvalidInput("density CSV needs at least 4 rows");
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r[0]);
    ys.push_back(r[1]);
  }
  auto unique_sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  xs = unique_sorted(xs);
  ys = unique_sorted(ys);
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
  if (nx < 2 || ny < 2 || rows.size() != static_cast<std::size_t>(nx) * ny) {
    throw InvalidInput("density CSV must list every node of a rectangular grid exactly once");
  }
  const double h = xs[1] - xs[0];
  auto uniform = [h](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
    }
    return true;
  };
  if (!uniform(xs) || !uniform(ys)) throw InvalidInput("density CSV grid must be uniform with equal spacing");
  std::vector<double> values(rows.size());
  for (const auto& r : rows) {
    const int i = static_cast<int>(std::lround((r[0] - xs[0]) / h));
    const int j = static_cast<int>(std::lround((r[1] - ys[0]) / h));
    values[static_cast<std::size_t>(i + nx * j)] = r[2];
  }
  return DensityGrid(Vec2(xs[0], ys[0]), h, nx, ny, std::move(values));
}

}  // namespace anyonlt::covering
