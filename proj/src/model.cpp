#include "anyonlt/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anyonlt/error.hpp"

namespace anyonlt::model {

namespace {

void require_finite(const Vec2& x, const char* what) {
  if (!std::isfinite(x.x()) || !std::isfinite(x.y())) {
    throw InvalidInput(std::string(what) + ": non-finite coordinate");
  }
}

void require_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("radius must be positive and finite");
  }
}

}  // namespace

AnyonParams::AnyonParams(double alpha, double radius) : alpha_(alpha), radius_(radius) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw InvalidInput("alpha must lie in [0, 2]");
  require_radius(radius);
}

SquareDomain::SquareDomain(Vec2 corner, double side) : corner_(std::move(corner)), side_(side) {
  require_finite(corner_, "square corner");
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidInput("square side must be positive");
}

bool SquareDomain::contains(const Vec2& x) const noexcept {
  return x.x() >= corner_.x() && x.x() <= corner_.x() + side_ && x.y() >= corner_.y() &&
         x.y() <= corner_.y() + side_;
}

Configuration::Configuration(SquareDomain square, std::vector<Vec2> inside, std::vector<Vec2> outside)
    : square_(std::move(square)), inside_(std::move(inside)), outside_(std::move(outside)) {
  for (const auto& x : inside_) {
    require_finite(x, "inside particle");
    if (!square_.contains(x)) throw InvalidInput("inside particle lies outside the square");
  }
  for (const auto& y : outside_) {
    require_finite(y, "outside particle");
    if (square_.contains(y)) throw InvalidInput("outside particle lies in the square");
  }
}

Configuration Configuration::with_particle(std::size_t j, const Vec2& position) const {
  if (j >= inside_.size()) throw IndexError("particle index out of range");
  auto moved = inside_;
  moved[j] = position;
  return Configuration(square_, std::move(moved), outside_);
}

double flux_factor(FluxWeight weight, double alpha) noexcept {
  return weight == FluxWeight::alpha ? alpha : 1.0;
}

double regularized_distance(const Vec2& x, double radius) {
  require_finite(x, "regularized_distance");
  require_radius(radius);
  return std::max(x.norm(), radius);
}

double smeared_coulomb(const Vec2& x, double radius) {
  require_finite(x, "smeared_coulomb");
  require_radius(radius);
  const double r = x.norm();
  if (r >= radius) return std::log(r);
  const double s = r / radius;
  return std::log(radius) + 0.5 * (s * s - 1.0);
}

Vec2 pair_kernel(const Vec2& x, double radius) {
  const double r2 = x.squaredNorm();
  const double d2 = std::max(r2, radius * radius);
  return perp(x) / d2;
}

Vec2 vector_potential_at(const Vec2& x, std::size_t j, const Configuration& config, double radius) {
  require_radius(radius);
  if (j >= config.n()) throw IndexError("particle index out of range");
  Vec2 a = Vec2::Zero();
  const auto& inside = config.inside();
  for (std::size_t k = 0; k < inside.size(); ++k) {
    if (k != j) a += pair_kernel(x - inside[k], radius);
  }
  for (const auto& y : config.outside()) a += pair_kernel(x - y, radius);
  return a;
}

Vec2 vector_potential(std::size_t j, const Configuration& config, double radius) {
  if (j >= config.n()) throw IndexError("particle index out of range");
  return vector_potential_at(config.inside()[j], j, config, radius);
}

double flux_potential(std::size_t j, const Configuration& config, double radius) {
  require_radius(radius);
  if (j >= config.n()) throw IndexError("particle index out of range");
  const Vec2& xj = config.inside()[j];
  const double r2 = radius * radius;
  int count = 0;
  const auto& inside = config.inside();
  for (std::size_t k = 0; k < inside.size(); ++k) {
    if (k != j && (xj - inside[k]).squaredNorm() < r2) ++count;
  }
  for (const auto& y : config.outside()) {
    if ((xj - y).squaredNorm() < r2) ++count;
  }
  return 2.0 * count / r2;
}

EnergyBreakdown energy_density(const StateSample& sample, const Configuration& config,
                               const AnyonParams& params, const EnergyOptions& options) {
  const std::size_t n = config.n();
  if (sample.gradients.size() != n) {
    throw InvalidInput("one gradient per inside particle is required");
  }
  const double alpha = params.alpha();
  const double radius = params.radius();
  const double modulus = std::abs(sample.psi);

  double magnetic = 0.0;
  double modulus_grad = 0.0;
  double potential = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 a = vector_potential(j, config, radius);
    // (-i grad + alpha A) psi
    const CVec2 d = Complex(0.0, -1.0) * sample.gradients[j] + (alpha * sample.psi) * a.cast<Complex>();
    magnetic += d.squaredNorm();
    if (modulus > 0.0) {
      // grad|psi| = Re(conj(psi) grad psi) / |psi|
      const Vec2 g = (std::conj(sample.psi) * sample.gradients[j]).real() / modulus;
      modulus_grad += g.squaredNorm();
    }
    potential += flux_potential(j, config, radius);
  }

  EnergyBreakdown out;
  if (options.mode == EnergyMode::kinetic_only) {
    out.e1 = magnetic;
    return out;
  }
  out.e1 = 0.5 * magnetic;
  out.e2_grad = 0.25 * modulus_grad;
  out.e2_pot = 0.25 * flux_factor(options.flux_weight, alpha) * potential * modulus * modulus;
  return out;
}

std::vector<EnergyBreakdown> energy_density(std::span<const StateSample> samples,
                                            std::span<const Configuration> configs,
                                            const AnyonParams& params, const EnergyOptions& options) {
  if (samples.size() != configs.size()) {
    throw InvalidInput("sample and configuration counts differ");
  }
  std::vector<EnergyBreakdown> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(energy_density(samples[i], configs[i], params, options));
  }
  return out;
}

}  // namespace anyonlt::model
