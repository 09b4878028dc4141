#include "anyonlt/magnetic_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "anyonlt/error.hpp"

namespace anyonlt::magnetic {

using linalg::CBlock;
using linalg::Complex;
using linalg::SparseMatrix;

namespace {

double unit_uniform(std::mt19937_64& rng) {
  // 53 random bits, independent of the standard library's distribution code
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LinkGrid2D LinkGrid2D::zero_field(int n_side, double side) {
  if (n_side < 3) throw InvalidInput("n_side must be at least 3");
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidInput("side must be positive");
  LinkGrid2D g;
  g.n_side = n_side;
  g.side = side;
  const std::size_t edges = static_cast<std::size_t>(n_side) * (n_side - 1);
  g.phase_x.assign(edges, 0.0);
  g.phase_y.assign(edges, 0.0);
  return g;
}

void LinkGrid2D::validate() const {
  if (n_side < 3) throw InvalidInput("n_side must be at least 3");
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidInput("side must be positive");
  const std::size_t edges = static_cast<std::size_t>(n_side) * (n_side - 1);
  if (phase_x.size() != edges || phase_y.size() != edges) {
    throw InvalidInput("phase arrays must have n_side*(n_side-1) entries per direction");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(phase_x.begin(), phase_x.end(), finite) || !std::all_of(phase_y.begin(), phase_y.end(), finite)) {
    throw InvalidInput("edge phases must be finite");
  }
}

LinkGrid2D LinkGrid2D::gauge_transformed(std::span<const double> phi) const {
  validate();
  if (static_cast<Index>(phi.size()) != dim()) throw InvalidInput("one potential value per node is required");
  LinkGrid2D out = *this;
  const int n = n_side;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      out.phase_x[i + (n - 1) * j] += phi[node(i, j)] - phi[node(i + 1, j)];
    }
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.phase_y[i + n * j] += phi[node(i, j)] - phi[node(i, j + 1)];
    }
  }
  return out;
}

Eigen::MatrixXd neumann_line_operator(int n_side, double side) {
  if (n_side < 3) throw InvalidInput("n_side must be at least 3");
  const double h = side / (n_side - 1);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_side, n_side);
  for (int i = 0; i + 1 < n_side; ++i) {
    const double s = 1.0 / (h * h * std::sqrt(line_weight(i, n_side) * line_weight(i + 1, n_side)));
    l(i, i) += 1.0 / (h * h * line_weight(i, n_side));
    l(i + 1, i + 1) += 1.0 / (h * h * line_weight(i + 1, n_side));
    l(i, i + 1) = -s;
    l(i + 1, i) = -s;
  }
  return l;
}

OperatorHandle assemble_magnetic_laplacian(const LinkGrid2D& grid) {
  grid.validate();
  const int n = grid.n_side;
  const double h = grid.spacing();
  const Index dim = grid.dim();

  Eigen::VectorXd weight(dim);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) weight(grid.node(i, j)) = line_weight(i, n) * line_weight(j, n);
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * 5);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  auto add_edge = [&](Index v, Index w, double c, double theta) {
    // K_vw = -c e^{i theta}, K_wv its conjugate; scaled by (h^2 sqrt(W_v W_w))^{-1}
    const double s = c / (h * h * std::sqrt(weight(v) * weight(w)));
    const Complex off = -s * std::polar(1.0, theta);
    triplets.emplace_back(v, w, off);
    triplets.emplace_back(w, v, std::conj(off));
    diag(v) += c / (h * h * weight(v));
    diag(w) += c / (h * h * weight(w));
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) add_edge(grid.node(i, j), grid.node(i + 1, j), line_weight(j, n), grid.phase_x[i + (n - 1) * j]);
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i < n; ++i) add_edge(grid.node(i, j), grid.node(i, j + 1), line_weight(i, n), grid.phase_y[i + n * j]);
  }
  for (Index v = 0; v < dim; ++v) triplets.emplace_back(v, v, Complex(diag(v), 0.0));

  SparseMatrix s(dim, dim);
  s.setFromTriplets(triplets.begin(), triplets.end());
  s.makeCompressed();
  return OperatorHandle(std::move(s), (h * h) * weight);
}

Spectrum lowest_eigenvalues(const OperatorHandle& op, int k, double tol, std::uint64_t seed) {
  linalg::EigenOptions opts;
  opts.k = k;
  opts.tol = tol;
  opts.seed = seed;
  // (S + 1)^{-1} by a sparse factorization; unlike a zero-field inverse it
  // is covariant under gauge changes and stays effective for strong fields.
  Eigen::SparseMatrix<Complex> shifted = op.matrix();
  for (Index v = 0; v < op.dim(); ++v) shifted.coeffRef(v, v) += 1.0;
  auto factor = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>>>(shifted);
  if (factor->info() != Eigen::Success) throw SolverError("preconditioner factorization failed", INFINITY);
  opts.preconditioner = [factor](CBlock& b) { b = factor->solve(b).eval(); };
  return linalg::lowest_eigenvalues(op, opts);
}

int count_below(const OperatorHandle& op, double lambda, double tol) {
  if (!std::isfinite(lambda)) throw InvalidInput("Lambda must be finite");
  const Index dim = op.dim();
  int k = 4;
  while (true) {
    if (2 * static_cast<Index>(k) >= dim) return count_below_inertia(op, lambda);
    const Spectrum s = lowest_eigenvalues(op, k, tol);
    if (s.eigenvalues.back() > lambda) {
      return static_cast<int>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                            [lambda](double v) { return v <= lambda; }));
    }
    k *= 2;
  }
}

int count_below_inertia(const OperatorHandle& op, double lambda) {
  if (op.dim() > 4096) throw ResourceError("dense inertia count is limited to 4096 unknowns");
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(op.matrix());
  dense = 0.5 * (dense + dense.adjoint()).eval();
  // N(Lambda) counts eigenvalues <= Lambda, i.e. negative inertia of S - Lambda - 0
  dense.diagonal().array() -= lambda;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(dense);
  int count = 0;
  for (Index i = 0; i < dense.rows(); ++i) {
    if (ldlt.vectorD()(i).real() <= 0.0) ++count;
  }
  return count;
}

std::vector<GreenSample> green_functions(const OperatorHandle& op, double e, std::span<const Index> sources) {
  if (!(e > 0.0) || !std::isfinite(e)) throw InvalidInput("shift e must be positive");
  const Index dim = op.dim();
  for (Index s : sources) {
    if (s < 0 || s >= dim) throw IndexError("source node out of range");
  }
  Eigen::SparseMatrix<Complex> shifted = op.matrix();
  for (Index v = 0; v < dim; ++v) shifted.coeffRef(v, v) += e;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> solver(shifted);
  if (solver.info() != Eigen::Success) throw SolverError("factorization of H + e failed", INFINITY);

  const Eigen::VectorXd inv_sqrt_mass = op.mass().cwiseSqrt().cwiseInverse();
  std::vector<GreenSample> out;
  out.reserve(sources.size());
  for (Index s : sources) {
    // (K + eM) G = e_s  with  K + eM = M^{1/2} (S + e) M^{1/2}
    linalg::CVector rhs = linalg::CVector::Zero(dim);
    rhs(s) = inv_sqrt_mass(s);
    linalg::CVector y = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw SolverError("Green function solve failed", INFINITY);
    GreenSample g;
    g.source_index = s;
    g.shift_e = e;
    g.values.resize(static_cast<std::size_t>(dim));
    for (Index v = 0; v < dim; ++v) g.values[static_cast<std::size_t>(v)] = y(v) * inv_sqrt_mass(v);
    out.push_back(std::move(g));
  }
  return out;
}

GreenSample green_function(const OperatorHandle& op, double e, Index source) {
  const Index sources[] = {source};
  return std::move(green_functions(op, e, sources).front());
}

double birman_schwinger_bound(double lambda, double lambda_target, int m) {
  if (m < 2) throw InvalidInput("the Birman-Schwinger sum diverges for m < 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("Lambda must be positive");
  const double e = lambda - lambda_target;
  if (!(lambda_target >= 0.0) || !(e > 0.0)) throw InvalidInput("need 0 <= lambda_target < Lambda");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  auto term = [&](long j, long k) { return std::pow(pi2 * static_cast<double>(j * j + k * k) + e, -m); };
  // shell s collects (j,k) with max(j,k) = s; summands are <= (pi^2 s^2)^{-m}
  // and a shell has 2s+1 points, so the tail beyond K is at most
  // pi^{-2m} int_K^inf (2s+1) s^{-2m} ds.
  auto tail = [&](double kk) {
    return std::pow(pi2, -m) * (2.0 * std::pow(kk, 2.0 - 2.0 * m) / (2.0 * m - 2.0) +
                                std::pow(kk, 1.0 - 2.0 * m) / (2.0 * m - 1.0));
  };
  double sum = term(0, 0);
  long s = 0;
  while (true) {
    ++s;
    double shell = term(s, s);
    for (long t = 0; t < s; ++t) shell += term(s, t) + term(t, s);
    sum += shell;
    if (tail(static_cast<double>(s)) <= 1e-10 * sum) break;
    if (s > 100000000) throw NumericError("Birman-Schwinger sum did not reach its tail tolerance");
  }
  return std::pow(lambda, m) * sum;
}

FieldFunction constant_field(double b) {
  if (!std::isfinite(b)) throw InvalidInput("field must be finite");
  return [b](double, double) { return b; };
}

FieldFunction random_smooth_field(double amplitude, std::uint64_t seed) {
  if (!std::isfinite(amplitude)) throw InvalidInput("amplitude must be finite");
  std::mt19937_64 rng(seed);
  struct Mode {
    double c, kx, ky, px, py;
  };
  std::vector<Mode> modes;
  double norm = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Mode md{2.0 * unit_uniform(rng) - 1.0, std::numbers::pi * a, std::numbers::pi * b,
              2.0 * std::numbers::pi * unit_uniform(rng), 2.0 * std::numbers::pi * unit_uniform(rng)};
      norm += std::abs(md.c);
      modes.push_back(md);
    }
  }
  for (auto& md : modes) md.c *= amplitude / norm;
  // coordinates are taken relative to a unit square
  return [modes](double x, double y) {
    double v = 0.0;
    for (const auto& md : modes) v += md.c * std::cos(md.kx * x + md.px) * std::cos(md.ky * y + md.py);
    return v;
  };
}

LinkGrid2D phases_from_field(const FieldFunction& field, int n_side, double side) {
  LinkGrid2D grid = LinkGrid2D::zero_field(n_side, side);
  const int n = n_side;
  const double h = grid.spacing();

  // Dirichlet Poisson problem on the interior nodes: (-Delta_h) phi = -B
  const int ni = n - 2;
  auto interior = [ni](int i, int j) { return static_cast<Index>(i - 1) + static_cast<Index>(ni) * (j - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(static_cast<Index>(ni) * ni);
  for (int j = 1; j <= ni; ++j) {
    for (int i = 1; i <= ni; ++i) {
      const Index r = interior(i, j);
      trip.emplace_back(r, r, 4.0 / (h * h));
      if (i > 1) trip.emplace_back(r, interior(i - 1, j), -1.0 / (h * h));
      if (i < ni) trip.emplace_back(r, interior(i + 1, j), -1.0 / (h * h));
      if (j > 1) trip.emplace_back(r, interior(i, j - 1), -1.0 / (h * h));
      if (j < ni) trip.emplace_back(r, interior(i, j + 1), -1.0 / (h * h));
      const double b = field(i * h, j * h);
      if (!std::isfinite(b)) throw InvalidInput("field sample is not finite");
      rhs(r) = -b;
    }
  }
  Eigen::SparseMatrix<double> lap(rhs.size(), rhs.size());
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
  if (solver.info() != Eigen::Success) throw SolverError("Poisson factorization failed", INFINITY);
  const Eigen::VectorXd inner = solver.solve(rhs);

  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);  // phi(i, j)
  for (int j = 1; j <= ni; ++j) {
    for (int i = 1; i <= ni; ++i) phi(i, j) = inner(interior(i, j));
  }

  // second-order differences, one-sided at the boundary
  auto d_dx = [&](int i, int j) {
    if (i == 0) return (-3.0 * phi(0, j) + 4.0 * phi(1, j) - phi(2, j)) / (2.0 * h);
    if (i == n - 1) return (3.0 * phi(n - 1, j) - 4.0 * phi(n - 2, j) + phi(n - 3, j)) / (2.0 * h);
    return (phi(i + 1, j) - phi(i - 1, j)) / (2.0 * h);
  };
  auto d_dy = [&](int i, int j) {
    if (j == 0) return (-3.0 * phi(i, 0) + 4.0 * phi(i, 1) - phi(i, 2)) / (2.0 * h);
    if (j == n - 1) return (3.0 * phi(i, n - 1) - 4.0 * phi(i, n - 2) + phi(i, n - 3)) / (2.0 * h);
    return (phi(i, j + 1) - phi(i, j - 1)) / (2.0 * h);
  };
  // A = (-d_y phi, d_x phi)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) grid.phase_x[i + (n - 1) * j] = -0.5 * h * (d_dy(i, j) + d_dy(i + 1, j));
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i < n; ++i) grid.phase_y[i + n * j] = 0.5 * h * (d_dx(i, j) + d_dx(i, j + 1));
  }
  return grid;
}

DiamagneticReport diamagnetic_check(const FieldFunction& field, int n_side, double e,
                                    std::span<const Index> sources, double tol) {
  const OperatorHandle free_op = assemble_magnetic_laplacian(LinkGrid2D::zero_field(n_side));
  const OperatorHandle field_op = assemble_magnetic_laplacian(phases_from_field(field, n_side));
  const auto g0 = green_functions(free_op, e, sources);
  const auto ga = green_functions(field_op, e, sources);
  DiamagneticReport report;
  report.max_violation = -INFINITY;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t v = 0; v < g0[s].values.size(); ++v) {
      report.max_violation = std::max(report.max_violation, std::abs(ga[s].values[v]) - g0[s].values[v].real());
    }
  }
  report.lambda1_free = lowest_eigenvalues(free_op, 1, tol).eigenvalues.front();
  report.lambda1_field = lowest_eigenvalues(field_op, 1, tol).eigenvalues.front();
  return report;
}

}  // namespace anyonlt::magnetic
