#pragma once

#include <Eigen/Dense>

namespace netda {

struct EigenSolution
{
  Eigen::MatrixXd vectors; // n x k, columns rhs'-orthonormal
  Eigen::VectorXd values;  // ascending
  double residual = 0.0;   // max_j |lhs a_j - l_j rhs' a_j| / (|lhs|_F |a_j|)
  double jitter = 0.0;     // jitter actually added to rhs
};

/// Cholesky factor of rhs' = sym(rhs) + jitter*I, reused across several
/// left-hand sides. When the factorization fails the jitter is raised tenfold,
/// up to three times, before giving up with NumericalError.
class DefiniteReduction
{
public:
  DefiniteReduction(const Eigen::MatrixXd& rhs, double jitter);

  Eigen::Index size() const { return rhs_.rows(); }
  double jitter() const { return jitter_; }
  const Eigen::MatrixXd& rhs() const { return rhs_; }

  /// L^{-1} B for the lower Cholesky factor L.
  Eigen::MatrixXd apply_inverse_factor(const Eigen::MatrixXd& B) const;

  /// L^{-1} S L^{-T}, symmetrized.
  Eigen::MatrixXd reduce(const Eigen::MatrixXd& S) const;

  /// k smallest eigenpairs of lhs a = l rhs' a.
  EigenSolution solve(const Eigen::MatrixXd& lhs, Eigen::Index k) const;

  /// Same, starting from an already reduced matrix C = L^{-1} lhs L^{-T}.
  /// `lhs` is only used to report the residual.
  EigenSolution solve_reduced(const Eigen::MatrixXd& C, const Eigen::MatrixXd& lhs, Eigen::Index k) const;

private:
  Eigen::MatrixXd rhs_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

/// Solves lhs A = rhs A diag(values) for the k smallest eigenvalues. Each
/// column's largest-magnitude entry is made nonnegative.
EigenSolution generalized_eig_smallest(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, Eigen::Index k,
                                       double jitter);

/// k smallest eigenpairs of a symmetric matrix (lower triangle is read).
void symmetric_eig_smallest(const Eigen::MatrixXd& C, Eigen::Index k, Eigen::VectorXd& values,
                            Eigen::MatrixXd& vectors);

} // namespace netda
