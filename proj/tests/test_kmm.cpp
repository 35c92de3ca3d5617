#include <doctest.h>

#include "netda/error.hpp"
#include "netda/kernel.hpp"
#include "netda/kmm.hpp"
#include "support.hpp"

#include <cmath>

using namespace netda;

namespace {

struct GridOptimum
{
  double w1 = 0.0, w2 = 0.0;
};

/// Exhaustive search over the feasible polygon of a 2-variable instance.
GridOptimum grid_optimum(const Eigen::Matrix2d& Ks, const Eigen::Vector2d& kappa, double B, double eps, double step)
{
  GridOptimum best;
  double fbest = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::floor(B / step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double w1 = i * step;
    for (int j = 0; j <= steps; ++j) {
      const double w2 = j * step;
      if (std::abs(w1 + w2 - 2.0) > 2.0 * eps + 1e-12) continue;
      const double f = 0.5 * (Ks(0, 0) * w1 * w1 + 2.0 * Ks(0, 1) * w1 * w2 + Ks(1, 1) * w2 * w2) -
                       kappa(0) * w1 - kappa(1) * w2;
      if (f < fbest) {
        fbest = f;
        best = {w1, w2};
      }
    }
  }
  return best;
}

void check_constraints(const KmmResult& r, double B, double eps)
{
  const double n = static_cast<double>(r.weights.size());
  CHECK(r.weights.minCoeff() >= 0.0);
  CHECK(r.weights.maxCoeff() <= B);
  CHECK(std::abs(r.weights.sum() - n) <= n * eps + 1e-6);
  CHECK(r.feasible);
}

} // namespace

TEST_CASE("B = 1 and eps = 0 pin every weight to one")
{
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd S = testutil::random_matrix(rng, 25, 3);
  const Eigen::MatrixXd T = testutil::random_matrix(rng, 30, 3).array() + 1.0;
  const auto r = kmm_weights(S, T, KernelSpec{}, 1.0, 0.0);
  CHECK((r.weights.array() == 1.0).all());
}

TEST_CASE("matching distributions give near-uniform weights")
{
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd S = testutil::random_matrix(rng, 40, 2);
  const auto r = kmm_weights(S, S, KernelSpec{});
  CHECK((r.weights.array() - 1.0).abs().maxCoeff() <= 0.15);
  check_constraints(r, 1000.0, default_kmm_epsilon(40));
}

TEST_CASE("the source point near the target gets more weight")
{
  Eigen::MatrixXd S(2, 1), T(3, 1);
  S << 0.0, 3.0;
  T << -0.2, 0.1, 0.3;
  KernelSpec spec;
  spec.bandwidth = 1.0;
  const auto r = kmm_weights(S, T, spec, 5.0, 0.5);
  CHECK(r.weights(0) > r.weights(1));
  check_constraints(r, 5.0, 0.5);
}

TEST_CASE("two-variable instances match exhaustive grid search")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int tested = 0;
  while (tested < 20) {
    const Eigen::MatrixXd S = testutil::random_matrix(rng, 2, 1) * 1.5;
    const Eigen::MatrixXd T = testutil::random_matrix(rng, 5, 1).array() + 2.0 * uni(rng) - 1.0;
    const double sigma = 1.0;
    Eigen::Matrix2d Ks;
    Eigen::Vector2d kappa = Eigen::Vector2d::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j)
        Ks(i, j) = std::exp(-std::pow(S(i, 0) - S(j, 0), 2) / (2.0 * sigma * sigma));
      for (Eigen::Index j = 0; j < T.rows(); ++j)
        kappa(i) += std::exp(-std::pow(S(i, 0) - T(j, 0), 2) / (2.0 * sigma * sigma));
    }
    if (Ks(0, 1) > 0.95) continue; // keep the oracle's grid resolution meaningful
    kappa *= 2.0 / static_cast<double>(T.rows());
    Ks.diagonal().array() += default_jitter(Ks);

    const double B = 1.5 + 1.5 * uni(rng);
    const double eps = 0.5 * uni(rng);
    KernelSpec spec;
    spec.bandwidth = sigma;
    const auto r = kmm_weights(S, T, spec, B, eps);
    const auto g = grid_optimum(Ks, kappa, B, eps, 1e-3);
    CHECK(std::abs(r.weights(0) - g.w1) <= 1e-2);
    CHECK(std::abs(r.weights(1) - g.w2) <= 1e-2);
    check_constraints(r, B, eps);
    ++tested;
  }
}

TEST_CASE("objective history is nonincreasing")
{
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd S = testutil::random_matrix(rng, 60, 2);
  const Eigen::MatrixXd T = testutil::random_matrix(rng, 50, 2).array() + 0.8;
  KmmConfig config;
  config.record_history = true;
  const auto r = kmm_weights(S, T, KernelSpec{}, config);
  REQUIRE(r.objective_history.size() >= 2);
  for (std::size_t i = 1; i < r.objective_history.size(); ++i)
    CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-10);
  CHECK(r.converged);
  check_constraints(r, config.B, default_kmm_epsilon(60));
}

TEST_CASE("box-slab projection")
{
  Eigen::VectorXd y(4);
  y << 3.0, -1.0, 0.5, 0.7;
  const auto w = project_box_slab(y, 1.0, 1.0, 2.0);
  CHECK(w.minCoeff() >= 0.0);
  CHECK(w.maxCoeff() <= 1.0);
  CHECK(w.sum() <= 2.0 + 1e-9);
  // Projection optimality: no feasible random point is closer to y.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Eigen::VectorXd v(4);
    for (int j = 0; j < 4; ++j) v(j) = uni(rng);
    if (v.sum() < 1.0 || v.sum() > 2.0) continue;
    CHECK((v - y).norm() >= (w - y).norm() - 1e-9);
  }
  const Eigen::VectorXd inside = (Eigen::VectorXd(3) << 0.2, 0.5, 0.9).finished();
  CHECK(project_box_slab(inside, 1.0, 1.0, 2.0) == inside);
}

TEST_CASE("infeasible constraints are rejected")
{
  const Eigen::MatrixXd S = Eigen::MatrixXd::Ones(4, 1);
  CHECK_THROWS_AS(kmm_weights(S, S, KernelSpec{}, 0.5, 0.1), ConfigError);
  CHECK_THROWS_AS(kmm_weights(S, S, KernelSpec{}, -1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(kmm_weights(S, S, KernelSpec{}, 1.0, -0.1), ConfigError);
}

TEST_CASE("select_validation")
{
  const auto source = make_domain(Eigen::MatrixXd::Zero(4, 1), Labels{1, 1, 2, 2});
  const auto split = select_validation(source, Eigen::Vector4d(0.1, 0.9, 0.5, 0.7), 0.5);
  CHECK(split.validation_indices == std::vector<Eigen::Index>{1, 3});
  CHECK(split.train_indices == std::vector<Eigen::Index>{0, 2});

  const auto ten = make_domain(Eigen::MatrixXd::Zero(10, 1), Labels(10, 1));
  const auto tied = select_validation(ten, Eigen::VectorXd::Ones(10), 0.3);
  CHECK(tied.validation_indices == std::vector<Eigen::Index>{0, 1, 2});
  CHECK(tied.train_indices.size() == 7);

  CHECK_THROWS_AS(select_validation(ten, Eigen::VectorXd::Ones(10), 1.0), ConfigError);
  CHECK_THROWS_AS(select_validation(ten, Eigen::VectorXd::Ones(9), 0.3), DataError);
}
