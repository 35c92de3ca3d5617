#include <benchmark/benchmark.h>

#include "netda/kernel.hpp"
#include "netda/net.hpp"

#include <random>

namespace {

Eigen::MatrixXd sample(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  return M;
}

netda::KernelSpec rbf()
{
  netda::KernelSpec s;
  s.bandwidth = 1.0;
  return s;
}

template <bool Parallel>
void BM_KernelMatrix(benchmark::State& state)
{
  const Eigen::MatrixXd X = sample(state.range(0), 64, 1);
  for (auto _ : state) {
    auto g = Parallel ? netda::kernel_matrix(X, rbf()) : netda::serial::kernel_matrix(X, rbf());
    benchmark::DoNotOptimize(g.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_CrossKernel(benchmark::State& state)
{
  const Eigen::MatrixXd A = sample(state.range(0), 64, 2);
  const Eigen::MatrixXd B = sample(state.range(0) / 2, 64, 3);
  for (auto _ : state) {
    auto K = Parallel ? netda::cross_kernel(A, B, rbf()) : netda::serial::cross_kernel(A, B, rbf());
    benchmark::DoNotOptimize(K.data());
  }
}

template <bool Parallel>
void BM_NearestNeighbour(benchmark::State& state)
{
  const Eigen::MatrixXd train = sample(20, state.range(0), 4);
  const Eigen::MatrixXd test = sample(20, state.range(0), 5);
  netda::Labels y(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1 + static_cast<int>(i % 10);
  for (auto _ : state) {
    auto p = Parallel ? netda::nn_classify(train, y, test) : netda::serial::nn_classify(train, y, test);
    benchmark::DoNotOptimize(p.data());
  }
}

} // namespace

BENCHMARK(BM_KernelMatrix<false>)->Name("kernel_matrix/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelMatrix<true>)->Name("kernel_matrix/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossKernel<false>)->Name("cross_kernel/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossKernel<true>)->Name("cross_kernel/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighbour<false>)->Name("nn_classify/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighbour<true>)->Name("nn_classify/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
