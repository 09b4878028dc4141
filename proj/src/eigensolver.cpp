#include "anyonlt/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "anyonlt/error.hpp"

namespace anyonlt::linalg {

OperatorHandle::OperatorHandle(SparseMatrix symmetric, Eigen::VectorXd mass)
    : matrix_(std::make_shared<const SparseMatrix>(std::move(symmetric))),
      mass_(std::make_shared<const Eigen::VectorXd>(std::move(mass))) {
  if (matrix_->rows() != matrix_->cols()) throw InvalidInput("operator must be square");
  if (mass_->size() != matrix_->rows()) throw InvalidInput("mass vector has the wrong length");
}

namespace {

// Orthonormalize the columns of `y` against the orthonormal `x` and among
// themselves, dropping numerically dependent columns.
CBlock orthonormal_complement(const CBlock& x, CBlock y) {
  for (int pass = 0; pass < 2; ++pass) {
    if (x.cols() > 0) y -= x * (x.adjoint() * y);
  }
  std::vector<Index> kept;
  CBlock q(y.rows(), y.cols());
  Index r = 0;
  for (Index j = 0; j < y.cols(); ++j) {
    CVector v = y.col(j);
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (r > 0) v -= q.leftCols(r) * (q.leftCols(r).adjoint() * v);
      if (x.cols() > 0) v -= x * (x.adjoint() * v);
    }
    const double nv = v.norm();
    if (nv <= 1e-10 * original) continue;
    q.col(r++) = v / nv;
  }
  return q.leftCols(r);
}

CBlock random_block(Index n, Index b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CBlock x(n, b);
  for (Index j = 0; j < b; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = Complex(normal(rng), normal(rng));
  }
  return x;
}

struct Ritz {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

Ritz rayleigh_ritz(const Eigen::MatrixXcd& reduced) {
  Eigen::MatrixXcd h = 0.5 * (reduced + reduced.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

Spectrum lobpcg(const std::function<void(const CBlock&, CBlock&)>& apply, Index dim,
                const EigenOptions& options) {
  if (options.k < 1) throw InvalidInput("k must be at least 1");
  if (options.k >= dim) throw InvalidInput("k must be smaller than the operator dimension");
  const Index k = options.k;
  const Index b = std::min<Index>(k + std::max(options.extra_vectors, 0), dim / 2 > k ? dim / 2 : k);

  CBlock x = random_block(dim, b, options.seed);
  if (options.projector) options.projector(x);
  x = orthonormal_complement(CBlock(dim, 0), x);
  if (x.cols() < k) throw SolverError("initial block lost rank after projection", INFINITY);

  CBlock hx(dim, x.cols());
  apply(x, hx);
  {
    Ritz rr = rayleigh_ritz(x.adjoint() * hx);
    x = x * rr.vectors;
    hx = hx * rr.vectors;
  }

  CBlock p(dim, 0);
  Eigen::VectorXd theta(x.cols());
  Eigen::VectorXd res(x.cols());
  double best = INFINITY;

  for (int it = 0; it <= options.max_iterations; ++it) {
    if (it % 10 == 0) apply(x, hx);  // refresh tracked H X against drift
    Eigen::MatrixXcd reduced = x.adjoint() * hx;
    for (Index j = 0; j < x.cols(); ++j) theta(j) = reduced(j, j).real();
    CBlock r = hx - x * theta.asDiagonal();
    for (Index j = 0; j < x.cols(); ++j) res(j) = r.col(j).norm();

    bool converged = true;
    double worst = 0.0;
    for (Index j = 0; j < k; ++j) {
      worst = std::max(worst, res(j) / std::max(1.0, std::abs(theta(j))));
      if (res(j) > options.tol * std::max(1.0, std::abs(theta(j)))) converged = false;
    }
    best = std::min(best, worst);

    if (converged) {
      // confirm against an explicit product
      apply(x, hx);
      r = hx - x * theta.asDiagonal();
      bool confirmed = true;
      for (Index j = 0; j < k; ++j) {
        res(j) = r.col(j).norm();
        if (res(j) > options.tol * std::max(1.0, std::abs(theta(j)))) confirmed = false;
      }
      if (confirmed) {
        Spectrum s;
        s.k_requested = static_cast<int>(k);
        s.iterations = it;
        for (Index j = 0; j < k; ++j) {
          s.eigenvalues.push_back(theta(j));
          s.residual_norms.push_back(res(j));
        }
        s.vectors = x.leftCols(k);
        return s;
      }
    }
    if (it == options.max_iterations) break;

    CBlock w = r;
    if (options.preconditioner) options.preconditioner(w);
    if (options.projector) options.projector(w);

    CBlock wp(dim, w.cols() + p.cols());
    wp << w, p;
    CBlock y = orthonormal_complement(x, std::move(wp));
    if (y.cols() == 0) {
      p.resize(dim, 0);
      continue;
    }
    CBlock hy(dim, y.cols());
    apply(y, hy);

    const Index m = x.cols() + y.cols();
    Eigen::MatrixXcd a(m, m);
    a.topLeftCorner(x.cols(), x.cols()) = reduced;
    a.topRightCorner(x.cols(), y.cols()) = x.adjoint() * hy;
    a.bottomLeftCorner(y.cols(), x.cols()) = a.topRightCorner(x.cols(), y.cols()).adjoint();
    a.bottomRightCorner(y.cols(), y.cols()) = y.adjoint() * hy;
    Ritz rr = rayleigh_ritz(a);

    const Eigen::MatrixXcd cx = rr.vectors.topLeftCorner(x.cols(), x.cols());
    const Eigen::MatrixXcd cy = rr.vectors.bottomLeftCorner(y.cols(), x.cols());
    p = y * cy;
    CBlock hp = hy * cy;
    x = x * cx + p;
    hx = hx * cx + hp;
    if (options.projector) {
      options.projector(x);
      options.projector(p);
    }
    // keep X orthonormal; H X is refreshed from the new basis
    Eigen::HouseholderQR<CBlock> qr(x);
    CBlock q = qr.householderQ() * CBlock::Identity(dim, x.cols());
    Eigen::MatrixXcd rfac = qr.matrixQR().topLeftCorner(x.cols(), x.cols()).triangularView<Eigen::Upper>();
    x = q;
    hx = hx * rfac.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(x.cols(), x.cols()));
  }
  std::ostringstream msg;
  msg << "LOBPCG did not converge in " << options.max_iterations << " iterations (best relative residual "
      << best << ")";
  throw SolverError(msg.str(), best);
}

Spectrum lowest_eigenvalues(const OperatorHandle& op, const EigenOptions& options) {
  return lobpcg([&op](const CBlock& in, CBlock& out) { op.apply(in, out); }, op.dim(), options);
}

Spectrum dense_lowest_eigenvalues(const OperatorHandle& op, int k) {
  if (k < 1 || k > op.dim()) throw InvalidInput("invalid eigenvalue count");
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(op.matrix());
  dense = 0.5 * (dense + dense.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  Spectrum s;
  s.k_requested = k;
  s.vectors = es.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j) {
    s.eigenvalues.push_back(es.eigenvalues()(j));
    s.residual_norms.push_back((dense * s.vectors.col(j) - es.eigenvalues()(j) * s.vectors.col(j)).norm());
  }
  return s;
}

KroneckerSumInverse::KroneckerSumInverse(const Eigen::MatrixXd& line_operator, int axes, double scale,
                                         double shift)
    : n_(static_cast<int>(line_operator.rows())), axes_(axes) {
  if (line_operator.rows() != line_operator.cols()) throw InvalidInput("line operator must be square");
  if (axes < 1) throw InvalidInput("at least one axis required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (line_operator + line_operator.transpose()));
  basis_ = es.eigenvectors().cast<Complex>();
  basis_t_ = basis_.transpose();
  dim_ = 1;
  for (int a = 0; a < axes; ++a) dim_ *= n_;
  inverse_diagonal_.resize(dim_);
  const Eigen::VectorXd& lam = es.eigenvalues();
  for (Index idx = 0; idx < dim_; ++idx) {
    Index rest = idx;
    double sum = 0.0;
    for (int a = 0; a < axes; ++a) {
      sum += lam(rest % n_);
      rest /= n_;
    }
    const double denom = scale * sum + shift;
    if (!(denom > 0.0)) throw InvalidInput("shifted Kronecker sum is not positive definite");
    inverse_diagonal_(idx) = 1.0 / denom;
  }
}

void KroneckerSumInverse::transform(CBlock& block, const Eigen::MatrixXcd& basis) const {
  Index stride = 1;
  for (int a = 0; a < axes_; ++a) {
    const Index outer = dim_ / (stride * n_);
    for (Index c = 0; c < block.cols(); ++c) {
      Complex* col = block.col(c).data();
      for (Index o = 0; o < outer; ++o) {
        Eigen::Map<Eigen::MatrixXcd> slab(col + o * stride * n_, stride, n_);
        slab = slab * basis;
      }
    }
    stride *= n_;
  }
}

void KroneckerSumInverse::apply(CBlock& block) const {
  if (block.rows() != dim_) throw InvalidInput("block has the wrong dimension");
  transform(block, basis_);  // coefficients in the eigenbasis
  block = inverse_diagonal_.asDiagonal() * block;
  transform(block, basis_t_);
}

}  // namespace anyonlt::linalg
