#include <doctest.h>

#include "netda/error.hpp"
#include "netda/kernel.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace netda;

namespace {

KernelSpec rbf(double sigma)
{
  KernelSpec s;
  s.bandwidth = sigma;
  return s;
}

KernelSpec linear()
{
  KernelSpec s;
  s.family = KernelFamily::linear;
  return s;
}

KernelSpec poly(int degree, double offset)
{
  KernelSpec s;
  s.family = KernelFamily::polynomial;
  s.degree = degree;
  s.offset = offset;
  return s;
}

} // namespace

TEST_CASE("linear kernel of orthonormal points is the identity")
{
  const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  CHECK(kernel_matrix(X, linear()).values == Eigen::MatrixXd::Identity(2, 2));
}

TEST_CASE("rbf diagonal is exactly one and off-diagonals follow the scalar formula")
{
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 25, 3);
  const double sigma = 1.7;
  const auto K = kernel_matrix(X, rbf(sigma)).values;
  CHECK((K.diagonal().array() == 1.0).all());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.rows(); ++j) {
      double r2 = 0.0;
      for (Eigen::Index c = 0; c < X.cols(); ++c) r2 += (X(i, c) - X(j, c)) * (X(i, c) - X(j, c));
      CHECK(K(i, j) == doctest::Approx(std::exp(-r2 / (2.0 * sigma * sigma))).epsilon(1e-13));
    }

  Eigen::MatrixXd two(2, 2);
  two << 0, 0, 3, 4;
  CHECK(kernel_matrix(two, rbf(2.0)).values(0, 1) == doctest::Approx(std::exp(-25.0 / 8.0)));
}

TEST_CASE("parallel and serial construction agree exactly")
{
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 97, 5);
  const Eigen::MatrixXd Y = testutil::random_matrix(rng, 41, 5);
  for (const auto& spec : {rbf(1.3), linear(), poly(3, 1.0)}) {
    const auto par = kernel_matrix(X, spec);
    const auto ser = serial::kernel_matrix(X, spec);
    CHECK(par.values == ser.values);
    CHECK(par.values == par.values.transpose());
    CHECK(cross_kernel(X, Y, spec) == serial::cross_kernel(X, Y, spec));
  }
}

TEST_CASE("cross_kernel matches kernel_matrix on the same input")
{
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 20, 4);
  const auto spec = rbf(0.9);
  CHECK((cross_kernel(X, X, spec) - kernel_matrix(X, spec).values).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 1;
  CHECK(cross_kernel(a, b, linear())(0, 0) == 0.0);

  const Eigen::MatrixXd A = testutil::random_matrix(rng, 3, 2);
  const Eigen::MatrixXd B = testutil::random_matrix(rng, 4, 2);
  const Eigen::MatrixXd C = cross_kernel(A, B, rbf(1.0));
  CHECK((C.array() > 0.0).all());
  CHECK((C.array() <= 1.0).all());

  CHECK_THROWS_AS(cross_kernel(A, testutil::random_matrix(rng, 2, 3), linear()), DataError);
}

TEST_CASE("Gram matrices are positive semidefinite")
{
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::MatrixXd X = testutil::random_matrix(rng, 30, 3);
    for (const auto& spec : {rbf(1.0), linear(), poly(2, 1.0), poly(3, 0.0)}) {
      const Eigen::MatrixXd K = kernel_matrix(X, spec).values;
      const double floor = -1e-8 * K.trace() / static_cast<double>(K.rows());
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff() >= floor);
    }
  }
}

TEST_CASE("kernel_matrix is permutation-equivariant")
{
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 15, 3);
  Eigen::PermutationMatrix<Eigen::Dynamic> P(15);
  P.setIdentity();
  std::shuffle(P.indices().data(), P.indices().data() + 15, rng);
  const auto spec = rbf(1.1);
  const Eigen::MatrixXd K = kernel_matrix(X, spec).values;
  const Eigen::MatrixXd KP = kernel_matrix(P * X, spec).values;
  CHECK((KP - P * K * P.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("median_bandwidth")
{
  Eigen::MatrixXd two(2, 2);
  two << 0, 0, 0, 3;
  CHECK(median_bandwidth(two) == 3.0);
  CHECK(median_bandwidth(Eigen::MatrixXd::Ones(5, 2)) == 1.0);

  std::mt19937_64 rng(6);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 100, 4);
  std::vector<double> d;
  for (Eigen::Index i = 0; i < 100; ++i)
    for (Eigen::Index j = i + 1; j < 100; ++j) d.push_back((X.row(i) - X.row(j)).norm());
  std::sort(d.begin(), d.end());
  const double oracle = 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
  CHECK(median_bandwidth(X) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("unset rbf bandwidth resolves to the median heuristic")
{
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd X = testutil::random_matrix(rng, 30, 2);
  const auto gram = kernel_matrix(X, KernelSpec{});
  REQUIRE(gram.spec.bandwidth);
  CHECK(*gram.spec.bandwidth == median_bandwidth(X));
}

TEST_CASE("kernel spec validation")
{
  CHECK_THROWS_AS(rbf(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(rbf(-1.0).validate(), ConfigError);
  CHECK_THROWS_AS(poly(0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(parse_kernel_family("cubic"), ConfigError);
  CHECK(parse_kernel_family("poly") == KernelFamily::polynomial);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(kernel_matrix(bad, linear()), DataError);
}

TEST_CASE("default_jitter scales with the mean diagonal")
{
  CHECK(default_jitter(4.0 * Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(4e-8));
  CHECK(default_jitter(Eigen::MatrixXd::Zero(3, 3)) == 1e-12);
}
