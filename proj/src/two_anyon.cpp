#include "anyonlt/two_anyon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "anyonlt/error.hpp"
#include "anyonlt/magnetic_grid.hpp"

namespace anyonlt::two_anyon {

using linalg::CBlock;
using linalg::Complex;
using linalg::SparseMatrix;
using model::Vec2;

namespace {

struct Quadrature {
  Eigen::VectorXd nodes;    // on [0, 1]
  Eigen::VectorXd weights;  // sum to 1
};

// Golub-Welsch on the Legendre Jacobi matrix, mapped to [0, 1].
Quadrature gauss_legendre(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k - 1, k) = b;
    jac(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes = (es.eigenvalues().array() + 1.0) / 2.0;
  q.weights = es.eigenvectors().row(0).transpose().array().square();
  return q;
}

Vec2 node_position(const TwoBodyGrid& grid, int i, int j) {
  const double h = grid.spacing();
  return grid.domain.corner() + Vec2(h * i, h * j);
}

// Field felt at `x` by a particle whose partner sits at `partner`.
Vec2 field_at(const TwoBodyGrid& grid, const Vec2& x, const Vec2& partner) {
  const double radius = grid.params.radius();
  Vec2 a = model::pair_kernel(x - partner, radius);
  for (const auto& y : grid.outside) a += model::pair_kernel(x - y, radius);
  return a;
}

// 2/R^2 times the number of other particles within R of `x`.
double flux_at(const TwoBodyGrid& grid, const Vec2& x, const Vec2& partner) {
  const double radius = grid.params.radius();
  const double r2 = radius * radius;
  int count = (x - partner).squaredNorm() < r2 ? 1 : 0;
  for (const auto& y : grid.outside) {
    if ((x - y).squaredNorm() < r2) ++count;
  }
  return 2.0 * count / r2;
}

struct Assembly {
  SparseMatrix matrix;
  Eigen::VectorXd mass;
};

// kinetic_weight * magnetic form + potential_weight * flux diagonal
Assembly assemble(const TwoBodyGrid& grid, double alpha, bool with_outside, double kinetic_weight,
                  double potential_weight) {
  grid.validate();
  const int n = grid.n_side;
  const double h = grid.spacing();
  const Index dim = grid.dim();
  TwoBodyGrid local = grid;
  if (!with_outside) local.outside.clear();

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = magnetic::line_weight(i, n);
  Eigen::VectorXd weight(dim);
  for (int j2 = 0; j2 < n; ++j2)
    for (int i2 = 0; i2 < n; ++i2)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i1 = 0; i1 < n; ++i1) weight(grid.index(i1, j1, i2, j2)) = w[i1] * w[j1] * w[i2] * w[j2];

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * 9);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  const double scale = kinetic_weight / (h * h);
  auto add_edge = [&](Index v, Index u, double c, double theta) {
    const double s = scale * c / std::sqrt(weight(v) * weight(u));
    const Complex off = -s * std::polar(1.0, theta);
    triplets.emplace_back(v, u, off);
    triplets.emplace_back(u, v, std::conj(off));
    diag(v) += scale * c / weight(v);
    diag(u) += scale * c / weight(u);
  };

  // Hops of one particle with the other frozen at node (p, q). The same
  // routine serves both particles; `first` selects which slot moves.
  auto hops = [&](bool first) {
    for (int q = 0; q < n; ++q) {
      for (int p = 0; p < n; ++p) {
        const Vec2 partner = node_position(grid, p, q);
        auto idx = [&](int i, int j) { return first ? grid.index(i, j, p, q) : grid.index(p, q, i, j); };
        const double transverse = w[p] * w[q];
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i + 1 < n; ++i) {
            const Vec2 mid = node_position(grid, i, j) + Vec2(0.5 * h, 0.0);
            const double theta = alpha * h * field_at(local, mid, partner).x();
            add_edge(idx(i, j), idx(i + 1, j), transverse * w[j], theta);
          }
        }
        for (int j = 0; j + 1 < n; ++j) {
          for (int i = 0; i < n; ++i) {
            const Vec2 mid = node_position(grid, i, j) + Vec2(0.0, 0.5 * h);
            const double theta = alpha * h * field_at(local, mid, partner).y();
            add_edge(idx(i, j), idx(i, j + 1), transverse * w[i], theta);
          }
        }
      }
    }
  };
  hops(true);
  hops(false);

  if (potential_weight != 0.0) {
    for (int j2 = 0; j2 < n; ++j2)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j1 = 0; j1 < n; ++j1)
          for (int i1 = 0; i1 < n; ++i1) {
            const Vec2 x1 = node_position(grid, i1, j1);
            const Vec2 x2 = node_position(grid, i2, j2);
            diag(grid.index(i1, j1, i2, j2)) += potential_weight * (flux_at(local, x1, x2) + flux_at(local, x2, x1));
          }
  }
  for (Index v = 0; v < dim; ++v) triplets.emplace_back(v, v, Complex(diag(v), 0.0));

  Assembly out;
  out.matrix.resize(dim, dim);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.mass = std::pow(h, 4) * weight;
  return out;
}

double kinetic_weight(model::EnergyMode mode) { return mode == model::EnergyMode::full ? 0.5 : 1.0; }

double potential_weight(const TwoBodyGrid& grid) {
  if (grid.mode != model::EnergyMode::full) return 0.0;
  return 0.25 * model::flux_factor(grid.flux_weight, grid.params.alpha());
}

std::vector<Index> swap_permutation(const TwoBodyGrid& grid) {
  const int n = grid.n_side;
  std::vector<Index> perm(static_cast<std::size_t>(grid.dim()));
  for (int j2 = 0; j2 < n; ++j2)
    for (int i2 = 0; i2 < n; ++i2)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i1 = 0; i1 < n; ++i1) perm[grid.index(i1, j1, i2, j2)] = grid.index(i2, j2, i1, j1);
  return perm;
}

}  // namespace

std::size_t TwoBodyGrid::estimated_bytes() const noexcept {
  // sparse operator (~9 nonzeros per row, value + column index), the free
  // operator for the modulus term, triplet staging and ~24 solver vectors
  const std::size_t d = static_cast<std::size_t>(dim());
  const std::size_t sparse = d * 9 * (sizeof(Complex) + sizeof(int));
  const std::size_t staging = d * 9 * sizeof(Eigen::Triplet<Complex>);
  return 2 * sparse + staging + d * 24 * sizeof(Complex);
}

void TwoBodyGrid::validate() const {
  if (n_side < 8) throw InvalidInput("two-body grids need n_side >= 8");
  for (const auto& y : outside) {
    if (!std::isfinite(y.x()) || !std::isfinite(y.y())) throw InvalidInput("outside particle is not finite");
    if (domain.contains(y)) throw InvalidInput("outside particle lies in the square");
  }
  if (n_side > 200 || estimated_bytes() > memory_budget_bytes) {
    std::ostringstream msg;
    msg << "two-body grid with n_side=" << n_side << " needs about " << (estimated_bytes() >> 20)
        << " MiB, budget is " << (memory_budget_bytes >> 20) << " MiB";
    throw ResourceError(msg.str());
  }
}

OperatorHandle assemble_two_body(const TwoBodyGrid& grid) {
  Assembly a = assemble(grid, grid.params.alpha(), true, kinetic_weight(grid.mode), potential_weight(grid));
  return OperatorHandle(std::move(a.matrix), std::move(a.mass));
}

OperatorHandle assemble_free_two_body(const TwoBodyGrid& grid) {
  Assembly a = assemble(grid, 0.0, false, 1.0, 0.0);
  return OperatorHandle(std::move(a.matrix), std::move(a.mass));
}

void antisymmetrize(const TwoBodyGrid& grid, CBlock& block) {
  if (block.rows() != grid.dim()) throw InvalidInput("block has the wrong dimension");
  const auto perm = swap_permutation(grid);
  for (Index c = 0; c < block.cols(); ++c) {
    for (Index v = 0; v < block.rows(); ++v) {
      const Index u = perm[static_cast<std::size_t>(v)];
      if (u <= v) continue;
      const Complex a = 0.5 * (block(v, c) - block(u, c));
      block(v, c) = a;
      block(u, c) = -a;
    }
    for (Index v = 0; v < block.rows(); ++v) {
      if (perm[static_cast<std::size_t>(v)] == v) block(v, c) = 0.0;
    }
  }
}

double antisymmetry_defect(const TwoBodyGrid& grid, const CVector& v) {
  if (v.size() != grid.dim()) throw InvalidInput("vector has the wrong dimension");
  const auto perm = swap_permutation(grid);
  double sym = 0.0;
  for (Index i = 0; i < v.size(); ++i) sym += std::norm(0.5 * (v(i) + v(perm[static_cast<std::size_t>(i)])));
  const double nv = v.norm();
  return nv > 0.0 ? std::sqrt(sym) / nv : 0.0;
}

TwoAnyonResult ground_energy(const TwoBodyGrid& grid, const SolveOptions& options) {
  const OperatorHandle op = assemble_two_body(grid);
  const auto perm = std::make_shared<const std::vector<Index>>(swap_permutation(grid));

  linalg::EigenOptions eo;
  eo.k = 1;
  eo.tol = options.tol;
  eo.max_iterations = options.max_iterations;
  eo.seed = options.seed;
  // exact inverse of (c * free + 1) commutes with the swap
  const Eigen::MatrixXd line = magnetic::neumann_line_operator(grid.n_side, grid.domain.side());
  auto pre = std::make_shared<linalg::KroneckerSumInverse>(line, 4, kinetic_weight(grid.mode), 1.0);
  eo.preconditioner = [pre](CBlock& b) { pre->apply(b); };
  eo.projector = [perm](CBlock& b) {
    for (Index c = 0; c < b.cols(); ++c) {
      for (Index v = 0; v < b.rows(); ++v) {
        const Index u = (*perm)[static_cast<std::size_t>(v)];
        if (u < v) continue;
        if (u == v) {
          b(v, c) = 0.0;
          continue;
        }
        const Complex a = 0.5 * (b(v, c) - b(u, c));
        b(v, c) = a;
        b(u, c) = -a;
      }
    }
  };
  const linalg::Spectrum s = linalg::lowest_eigenvalues(op, eo);

  TwoAnyonResult r;
  r.quadratic_part = s.eigenvalues.front();
  r.residual = s.residual_norms.front();
  r.iterations = s.iterations;
  r.state = s.vectors.col(0);
  r.state /= r.state.norm();
  r.antisymmetry_defect = antisymmetry_defect(grid, r.state);
  if (grid.mode == model::EnergyMode::full) {
    // |u| in symmetric form equals M^{1/2} |psi| since M > 0
    const OperatorHandle free_op = assemble_free_two_body(grid);
    const CVector modulus = r.state.cwiseAbs().cast<Complex>();
    r.modulus_term = 0.25 * modulus.dot(free_op.apply(modulus)).real();
  }
  r.energy = r.quadratic_part + r.modulus_term;
  return r;
}

double discrete_functional(const TwoBodyGrid& grid, const CVector& psi) {
  if (psi.size() != grid.dim()) throw InvalidInput("state has the wrong dimension");
  const OperatorHandle op = assemble_two_body(grid);
  const Eigen::VectorXd root_mass = op.mass().cwiseSqrt();
  const CVector u = root_mass.cast<Complex>().cwiseProduct(psi);
  const double norm2 = u.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidInput("state has zero norm");
  double value = u.dot(op.apply(u)).real();
  if (grid.mode == model::EnergyMode::full) {
    const OperatorHandle free_op = assemble_free_two_body(grid);
    const CVector modulus = u.cwiseAbs().cast<Complex>();
    value += 0.25 * modulus.dot(free_op.apply(modulus)).real();
  }
  return value / norm2;
}

CVector trial_state_samples(const TwoBodyGrid& grid) {
  const int n = grid.n_side;
  CVector psi(grid.dim());
  for (int j2 = 0; j2 < n; ++j2)
    for (int i2 = 0; i2 < n; ++i2)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i1 = 0; i1 < n; ++i1) {
          const Vec2 d = node_position(grid, i1, j1) - node_position(grid, i2, j2);
          psi(grid.index(i1, j1, i2, j2)) = d.x() + d.y();
        }
  return psi;
}

TrialStateBound trial_state_bound(const model::AnyonParams& params, int nodes, model::FluxWeight flux_weight) {
  if (nodes < 4) throw InvalidInput("at least 4 quadrature nodes are required");
  const double alpha = params.alpha();
  const double radius = params.radius();
  const Quadrature gl = gauss_legendre(nodes);

  // Every integrand depends on d = x1 - x2 only; the pair density of d over
  // the unit square pair is (1 - |d1|)(1 - |d2|) on [-1, 1]^2. Each quadrant
  // is split at theta = pi/4 and at r = R so that every piece is smooth.
  double norm2 = 0.0, field_term = 0.0, inside_mass = 0.0;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      for (int half = 0; half < 2; ++half) {
        const double t0 = half * std::numbers::pi / 4.0;
        for (Index it = 0; it < gl.nodes.size(); ++it) {
          const double theta = t0 + gl.nodes(it) * std::numbers::pi / 4.0;
          const double wt = gl.weights(it) * std::numbers::pi / 4.0;
          const double c = std::cos(theta), s = std::sin(theta);
          const double r_max = 1.0 / std::max(c, s);
          const double cuts[3] = {0.0, std::min(radius, r_max), r_max};
          for (int piece = 0; piece < 2; ++piece) {
            const double r0 = cuts[piece], r1 = cuts[piece + 1];
            if (r1 <= r0) continue;
            for (Index ir = 0; ir < gl.nodes.size(); ++ir) {
              const double r = r0 + gl.nodes(ir) * (r1 - r0);
              const double wr = gl.weights(ir) * (r1 - r0);
              const double a = r * c, b = r * s;
              const double density = (1.0 - a) * (1.0 - b);
              const double psi = s1 * a + s2 * b;
              const double reg2 = std::max(r * r, radius * radius);
              const double weight = wt * wr * r * density;
              norm2 += weight * psi * psi;
              // |A|^2 = |d|^2 / |d|_R^4
              field_term += weight * psi * psi * r * r / (reg2 * reg2);
              if (piece == 0 && r < radius) inside_mass += weight * psi * psi;
            }
          }
        }
      }
    }
  }
  // |grad_1 psi_2|^2 = 2 everywhere and the pair density integrates to 1
  const double grad_term = 2.0;
  const double magnetic_1 = grad_term + alpha * alpha * field_term;  // int |(-i grad_1 + alpha A) psi|^2
  TrialStateBound out;
  out.norm_squared = norm2;
  out.displayed_chain = 2.0 * magnetic_1;
  out.raw_quotient = out.displayed_chain / norm2;
  // sum over both particles of (1/2)|D psi|^2 + (1/4)|grad|psi||^2 + (1/4) f V |psi|^2,
  // V_j = 2/R^2 on |d| < R
  const double flux = model::flux_factor(flux_weight, alpha);
  out.weighted_chain = 2.0 * (0.5 * magnetic_1 + 0.25 * grad_term + 0.25 * flux * 2.0 / (radius * radius) * inside_mass);
  return out;
}

AlphaProfile e2_alpha_profile(double gamma, int n_side, const std::vector<double>& alphas, int workers,
                              const SolveOptions& options) {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  if (alphas.empty()) throw InvalidInput("at least one alpha is required");
  AlphaProfile profile;
  profile.points.resize(alphas.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= alphas.size()) return;
      try {
        TwoBodyGrid grid;
        grid.n_side = n_side;
        grid.params = model::AnyonParams(alphas[i], gamma);
        grid.mode = model::EnergyMode::kinetic_only;
        const TwoAnyonResult r = ground_energy(grid, options);
        profile.points[i] = {alphas[i], r.energy, r.residual};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(alphas.size())));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  profile.infimum_ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : profile.points) {
    if (p.alpha != 1.0) profile.infimum_ratio = std::min(profile.infimum_ratio, p.energy / std::abs(p.alpha - 1.0));
  }
  return profile;
}

}  // namespace anyonlt::two_anyon
