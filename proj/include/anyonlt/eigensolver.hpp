#pragma once

// Hermitian operators on lumped-mass grids and a block LOBPCG solver for
// their lowest eigenpairs.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace anyonlt::linalg {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CBlock = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Immutable Hermitian operator in symmetric form S = M^{-1/2} K M^{-1/2},
/// where K is the stiffness (quadratic form) and M the lumped quadrature
/// weights. Copies share the underlying storage.
class OperatorHandle {
 public:
  OperatorHandle(SparseMatrix symmetric, Eigen::VectorXd mass);

  Index dim() const noexcept { return matrix_->rows(); }
  const SparseMatrix& matrix() const noexcept { return *matrix_; }
  /// Quadrature weight of every node (sums to the domain measure).
  const Eigen::VectorXd& mass() const noexcept { return *mass_; }

  void apply(const CBlock& in, CBlock& out) const { out.noalias() = (*matrix_) * in; }
  CVector apply(const CVector& in) const { return (*matrix_) * in; }

 private:
  std::shared_ptr<const SparseMatrix> matrix_;
  std::shared_ptr<const Eigen::VectorXd> mass_;
};

/// In-place block transform (preconditioner or projector).
using BlockTransform = std::function<void(CBlock&)>;

struct EigenOptions {
  int k = 1;
  double tol = 1e-8;
  int max_iterations = 3000;
  int extra_vectors = 3;
  std::uint64_t seed = 0x5eed;
  BlockTransform preconditioner;  // optional, must commute with `projector`
  BlockTransform projector;       // optional orthogonal projector onto a symmetry sector
};

struct Spectrum {
  std::vector<double> eigenvalues;     // ascending
  std::vector<double> residual_norms;  // ||S v - lambda v|| per pair
  int k_requested = 0;
  int iterations = 0;
  CBlock vectors;  // orthonormal columns in symmetric form
};

/// k smallest eigenpairs of a Hermitian operator given by its action.
Spectrum lobpcg(const std::function<void(const CBlock&, CBlock&)>& apply, Index dim,
                const EigenOptions& options);

/// k smallest eigenpairs of `op`; throws SolverError if the budget runs out.
Spectrum lowest_eigenvalues(const OperatorHandle& op, const EigenOptions& options);

/// Full dense diagonalization; reference path for small operators.
Spectrum dense_lowest_eigenvalues(const OperatorHandle& op, int k);

/// Exact inverse of (scale * sum_axes L + shift) for a Kronecker sum of one
/// 1-D symmetric matrix L over `axes` axes, applied through the eigenbasis
/// of L. Flat index ordering is i0 + n i1 + n^2 i2 + ...
class KroneckerSumInverse {
 public:
  KroneckerSumInverse(const Eigen::MatrixXd& line_operator, int axes, double scale, double shift);

  void apply(CBlock& block) const;
  Index dim() const noexcept { return dim_; }

 private:
  void transform(CBlock& block, const Eigen::MatrixXcd& basis) const;

  int n_;
  int axes_;
  Index dim_;
  Eigen::MatrixXcd basis_;
  Eigen::MatrixXcd basis_t_;
  Eigen::VectorXd inverse_diagonal_;
};

}  // namespace anyonlt::linalg
