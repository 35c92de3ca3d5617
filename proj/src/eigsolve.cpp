#include "netda/eigsolve.hpp"
#include "netda/error.hpp"
#include "netda/kernel.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace netda {

namespace {

void require_symmetric(const Eigen::MatrixXd& M, const char* what)
{
  if (M.rows() != M.cols()) throw DataError(std::string(what) + " must be square");
  if (!M.allFinite()) throw NumericalError(std::string(what) + " contains non-finite entries");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    std::ostringstream msg;
    msg << what << " is not symmetric (max |M - M^T| = " << asym << ")";
    throw DataError(msg.str());
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M)
{
  return 0.5 * (M + M.transpose());
}

void fix_signs(Eigen::MatrixXd& V)
{
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    Eigen::Index imax = 0;
    V.col(c).cwiseAbs().maxCoeff(&imax);
    if (V(imax, c) < 0.0) V.col(c) *= -1.0;
  }
}

} // namespace

void symmetric_eig_smallest(const Eigen::MatrixXd& C, Eigen::Index k, Eigen::VectorXd& values,
                            Eigen::MatrixXd& vectors)
{
  const Eigen::Index n = C.rows();
  if (k < 1 || k > n) throw ConfigError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) + "x" +
                                        std::to_string(n) + " problem");
  Eigen::MatrixXd work = C; // dsyevr overwrites its input
  Eigen::VectorXd w(n);
  vectors.resize(n, k);
  std::vector<lapack_int> isuppz(static_cast<std::size_t>(2 * std::max<Eigen::Index>(k, 1)));
  lapack_int found = 0;
  const double abstol = LAPACKE_dlamch('S');
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), work.data(),
                     static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k), abstol, &found, w.data(),
                     vectors.data(), static_cast<lapack_int>(n), isuppz.data());
  if (info != 0 || found != k)
    throw NumericalError("dsyevr failed (info=" + std::to_string(info) + ", found " + std::to_string(found) + " of " +
                         std::to_string(k) + " eigenpairs)");
  values = w.head(k);
}

DefiniteReduction::DefiniteReduction(const Eigen::MatrixXd& rhs, double jitter)
{
  require_symmetric(rhs, "rhs");
  if (!(jitter >= 0.0)) throw ConfigError("jitter must be nonnegative");
  const Eigen::MatrixXd base = symmetrized(rhs);
  const Eigen::Index n = base.rows();

  double j = jitter;
  std::ostringstream tried;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    rhs_ = base;
    rhs_.diagonal().array() += j;
    llt_.compute(rhs_);
    if (llt_.info() == Eigen::Success && llt_.matrixLLT().diagonal().minCoeff() > 0.0 &&
        llt_.matrixLLT().allFinite()) {
      jitter_ = j;
      return;
    }
    tried << (attempt ? ", " : "") << j;
    j = j > 0.0 ? 10.0 * j : default_jitter(base.cwiseAbs());
  }
  std::ostringstream msg;
  msg << "rhs is not positive definite after jitter escalation (n=" << n << ", trace=" << base.trace()
      << ", min diagonal=" << base.diagonal().minCoeff() << ", jitter tried: " << tried.str() << ")";
  throw NumericalError(msg.str());
}

Eigen::MatrixXd DefiniteReduction::apply_inverse_factor(const Eigen::MatrixXd& B) const
{
  return llt_.matrixL().solve(B);
}

Eigen::MatrixXd DefiniteReduction::reduce(const Eigen::MatrixXd& S) const
{
  Eigen::MatrixXd half = llt_.matrixL().solve(S);          // L^{-1} S
  Eigen::MatrixXd C = llt_.matrixL().solve(half.transpose()); // L^{-1} S^T L^{-T}
  return symmetrized(C);
}

EigenSolution DefiniteReduction::solve(const Eigen::MatrixXd& lhs, Eigen::Index k) const
{
  require_symmetric(lhs, "lhs");
  if (lhs.rows() != size()) throw DataError("lhs and rhs sizes differ");
  const Eigen::MatrixXd sym = symmetrized(lhs);
  return solve_reduced(reduce(sym), sym, k);
}

EigenSolution DefiniteReduction::solve_reduced(const Eigen::MatrixXd& C, const Eigen::MatrixXd& lhs,
                                               Eigen::Index k) const
{
  if (C.rows() != size() || lhs.rows() != size()) throw DataError("reduced problem size mismatch");
  if (k < 1 || k > size())
    throw ConfigError("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(size()) + "]");

  EigenSolution sol;
  sol.jitter = jitter_;
  Eigen::MatrixXd Y;
  symmetric_eig_smallest(C, k, sol.values, Y);
  // A = L^{-T} Y is rhs'-orthonormal because Y is orthonormal.
  sol.vectors = llt_.matrixU().solve(Y);
  fix_signs(sol.vectors);

  // Rayleigh quotients recover accuracy the reduction loses when rhs' is ill-conditioned.
  Eigen::MatrixXd LA = lhs * sol.vectors;
  Eigen::MatrixXd RA = rhs_ * sol.vectors;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double denom = sol.vectors.col(c).dot(RA.col(c));
    if (denom > 0.0) sol.values(c) = sol.vectors.col(c).dot(LA.col(c)) / denom;
  }
  // Nearly equal eigenvalues can swap order after refinement.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return sol.values(a) < sol.values(b); });
  if (!std::is_sorted(sol.values.data(), sol.values.data() + k)) {
    const Eigen::VectorXd v = sol.values;
    const Eigen::MatrixXd A = sol.vectors, la = LA, ra = RA;
    for (Eigen::Index c = 0; c < k; ++c) {
      const Eigen::Index src = order[static_cast<std::size_t>(c)];
      sol.values(c) = v(src);
      sol.vectors.col(c) = A.col(src);
      LA.col(c) = la.col(src);
      RA.col(c) = ra.col(src);
    }
  }

  const double lhs_norm = std::max(lhs.norm(), std::numeric_limits<double>::min());
  const Eigen::MatrixXd R = LA - RA * sol.values.asDiagonal();
  for (Eigen::Index c = 0; c < k; ++c)
    sol.residual = std::max(sol.residual, R.col(c).norm() / (lhs_norm * sol.vectors.col(c).norm()));
  return sol;
}

EigenSolution generalized_eig_smallest(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, Eigen::Index k,
                                       double jitter)
{
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw DataError("lhs and rhs sizes differ");
  if (k < 1 || k > lhs.rows())
    throw ConfigError("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(lhs.rows()) + "]");
  return DefiniteReduction(rhs, jitter).solve(lhs, k);
}

} // namespace netda
