#include <doctest.h>

#include "netda/eigsolve.hpp"
#include "netda/error.hpp"
#include "support.hpp"

using namespace netda;

namespace {

double max_abs(const Eigen::MatrixXd& M)
{
  return M.cwiseAbs().maxCoeff();
}

/// Cosines of the principal angles between two subspaces in the B inner product.
Eigen::VectorXd principal_cosines(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V, const Eigen::MatrixXd& B)
{
  return Eigen::JacobiSVD<Eigen::MatrixXd>(U.transpose() * B * V).singularValues();
}

} // namespace

TEST_CASE("identity problem")
{
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  const auto sol = generalized_eig_smallest(I, I, 2, 0.0);
  CHECK(sol.values.isApprox(Eigen::Vector2d(1, 1)));
  CHECK(max_abs(sol.vectors.transpose() * sol.vectors - Eigen::MatrixXd::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("diagonal problem returns unit basis vectors")
{
  const Eigen::MatrixXd lhs = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto sol = generalized_eig_smallest(lhs, Eigen::MatrixXd::Identity(3, 3), 2, 0.0);
  CHECK(sol.values(0) == doctest::Approx(1.0));
  CHECK(sol.values(1) == doctest::Approx(2.0));
  CHECK((sol.vectors.col(0) - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-12);
  CHECK((sol.vectors.col(1) - Eigen::Vector3d(0, 0, 1)).norm() <= 1e-12);
}

TEST_CASE("random problems match the dense full-spectrum oracle")
{
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd lhs = testutil::random_symmetric(rng, 15);
    const Eigen::MatrixXd rhs = testutil::random_spd(rng, 15);
    const auto sol = generalized_eig_smallest(lhs, rhs, 4, 0.0);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> oracle(lhs, rhs);
    for (int i = 0; i < 4; ++i)
      CHECK(sol.values(i) == doctest::Approx(oracle.eigenvalues()(i)).epsilon(1e-8));
    for (int i = 1; i < 4; ++i) CHECK(sol.values(i) >= sol.values(i - 1));
    CHECK(max_abs(sol.vectors.transpose() * rhs * sol.vectors - Eigen::MatrixXd::Identity(4, 4)) <= 1e-6);
    CHECK(sol.residual <= 1e-6);
    const double trace = (sol.vectors.transpose() * lhs * sol.vectors).trace();
    CHECK(trace == doctest::Approx(sol.values.sum()).epsilon(1e-6));
    const Eigen::VectorXd cosines = principal_cosines(sol.vectors, oracle.eigenvectors().leftCols(4), rhs);
    CHECK(cosines.minCoeff() >= 1.0 - 1e-8);
  }
}

TEST_CASE("sign convention and nested solutions")
{
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd lhs = testutil::random_symmetric(rng, 10);
  const Eigen::MatrixXd rhs = testutil::random_spd(rng, 10);
  const auto big = generalized_eig_smallest(lhs, rhs, 5, 0.0);
  const auto small = generalized_eig_smallest(lhs, rhs, 3, 0.0);
  for (Eigen::Index c = 0; c < 5; ++c) {
    Eigen::Index imax = 0;
    big.vectors.col(c).cwiseAbs().maxCoeff(&imax);
    CHECK(big.vectors(imax, c) >= 0.0);
  }
  CHECK(max_abs(big.vectors.leftCols(3) - small.vectors) <= 1e-8);
  CHECK(max_abs(big.values.head(3) - small.values) <= 1e-10);
}

TEST_CASE("repeated eigenvalues are compared by subspace")
{
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(testutil::random_matrix(rng, 6, 6)).householderQ();
  const Eigen::VectorXd spectrum = (Eigen::VectorXd(6) << 1, 1, 1, 4, 5, 6).finished();
  const Eigen::MatrixXd lhs = Q * spectrum.asDiagonal() * Q.transpose();
  const auto sol = generalized_eig_smallest(lhs, Eigen::MatrixXd::Identity(6, 6), 3, 0.0);
  const Eigen::VectorXd cosines = principal_cosines(sol.vectors, Q.leftCols(3), Eigen::MatrixXd::Identity(6, 6));
  CHECK(cosines.minCoeff() >= 1.0 - 1e-10);
}

TEST_CASE("singular rhs is rescued by jitter")
{
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd F = testutil::random_matrix(rng, 8, 3);
  const Eigen::MatrixXd rhs = F * F.transpose(); // rank 3
  const Eigen::MatrixXd lhs = testutil::random_spd(rng, 8);
  const auto sol = generalized_eig_smallest(lhs, rhs, 2, 1e-6);
  CHECK(sol.jitter >= 1e-6);
  const Eigen::MatrixXd rhs_j = rhs + sol.jitter * Eigen::MatrixXd::Identity(8, 8);
  CHECK(max_abs(sol.vectors.transpose() * rhs_j * sol.vectors - Eigen::MatrixXd::Identity(2, 2)) <= 1e-6);
}

TEST_CASE("jitter escalation stops after three retries")
{
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(3, 3);
  rhs(2, 2) = -1.0;
  CHECK_THROWS_AS(generalized_eig_smallest(Eigen::MatrixXd::Identity(3, 3), rhs, 1, 1e-8), NumericalError);
}

TEST_CASE("argument validation")
{
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(generalized_eig_smallest(I, I, 4, 0.0), ConfigError);
  CHECK_THROWS_AS(generalized_eig_smallest(I, I, 0, 0.0), ConfigError);
  Eigen::MatrixXd asym = I;
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(generalized_eig_smallest(asym, I, 1, 0.0), DataError);
  CHECK_THROWS_AS(generalized_eig_smallest(I, Eigen::MatrixXd::Identity(2, 2), 1, 0.0), DataError);
}
