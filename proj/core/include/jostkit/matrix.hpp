#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "jostkit/error.hpp"

namespace jostkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

ComplexMatrix identity(Eigen::Index n);

// Max-row-sum norm, the norm used for potentials, moments and residuals.
double norm(const ComplexMatrix& m);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

// 2-norm condition number; +inf for singular input.
double condition_number(const ComplexMatrix& m);

ComplexMatrix adjoint(const ComplexMatrix& m);
Complex det(const ComplexMatrix& m);

// LU inverse guarded by a condition cap; throws Singular beyond it.
ComplexMatrix inverse(const ComplexMatrix& m, double cond_cap = 1e14);

bool all_finite(const ComplexMatrix& m);

// Row/column reordering stored as an index list.  As a matrix P this is the
// convention P(i, order[i]) = 1, so P*X gathers rows of X in `order`.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Eigen::Index> order);
  static Permutation identity(Eigen::Index n);

  Eigen::Index size() const { return static_cast<Eigen::Index>(order_.size()); }
  const std::vector<Eigen::Index>& order() const { return order_; }
  bool is_identity() const;

  ComplexMatrix left(const ComplexMatrix& x) const;       // P * X
  ComplexMatrix left_inv(const ComplexMatrix& x) const;   // P^-1 * X
  ComplexMatrix right(const ComplexMatrix& x) const;      // X * P
  ComplexMatrix right_inv(const ComplexMatrix& x) const;  // X * P^-1
  ComplexMatrix matrix() const;
  Permutation inverse() const;

 private:
  std::vector<Eigen::Index> order_;
};

struct BlockPartition {
  ComplexMatrix A;  // mu x mu
  ComplexMatrix B;  // mu x (n-mu)
  ComplexMatrix C;  // (n-mu) x mu
  ComplexMatrix D;  // (n-mu) x (n-mu)
};

BlockPartition partition(const ComplexMatrix& m, Eigen::Index mu);
ComplexMatrix reassemble(const BlockPartition& blocks);

// Zero-eigenvalue structure of a square matrix M: a transform S whose leading
// columns are Jordan chains for eigenvalue 0, and permutations with
// P2 * S^-1 * M * S * P1 = diag(0_mu, D0), D0 invertible.
struct ZeroEigenData {
  Eigen::Index mu = 0;
  Eigen::Index nu = 0;
  ComplexMatrix S;
  ComplexMatrix S_inv;
  Permutation P1;
  Permutation P2;
  double tol = 0.0;
  double scale = 0.0;
  std::vector<Eigen::Index> chain_lengths;
  // P2 * S^-1 * M * S * P1
  ComplexMatrix transformed;
  // true when the nonzero part uses an orthonormal invariant-subspace basis
  // instead of eigenvectors.
  bool schur_completion = false;

  ComplexMatrix to_canonical(const ComplexMatrix& x) const;    // P2 S^-1 X S P1
  ComplexMatrix from_canonical(const ComplexMatrix& z) const;  // S P2^-1 Z P1^-1 S^-1
};

struct RankDecision {
  Eigen::Index rank = 0;
  double threshold = 0.0;
  Eigen::VectorXd singular_values;
};

// Singular values <= tol*scale count as zero.  Throws RankAmbiguous when a
// singular value falls within a factor of 10 of the threshold on either side.
RankDecision decide_rank(const ComplexMatrix& m, double tol, double scale);

// Orthonormal basis of the numerical kernel under the same threshold rule.
ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol, double scale);

ZeroEigenData zero_eigen_structure(const ComplexMatrix& m, double tol = 1e-9,
                                   double scale = -1.0);

}  // namespace jostkit
