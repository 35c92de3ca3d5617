#include "netda/kernel.hpp"
#include "netda/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netda {

const char* to_string(KernelFamily family)
{
  switch (family) {
  case KernelFamily::linear: return "linear";
  case KernelFamily::rbf: return "rbf";
  case KernelFamily::polynomial: return "poly";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name)
{
  if (name == "linear") return KernelFamily::linear;
  if (name == "rbf") return KernelFamily::rbf;
  if (name == "poly" || name == "polynomial") return KernelFamily::polynomial;
  throw ConfigError("unknown kernel family '" + name + "' (expected linear, rbf or poly)");
}

void KernelSpec::validate() const
{
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth)))
    throw ConfigError("kernel bandwidth must be a positive finite number");
  if (family == KernelFamily::polynomial && degree < 1) throw ConfigError("polynomial degree must be >= 1");
  if (!std::isfinite(offset)) throw ConfigError("polynomial offset must be finite");
}

KernelSpec resolve_bandwidth(const KernelSpec& spec, const Eigen::MatrixXd& X)
{
  KernelSpec out = spec;
  if (out.family == KernelFamily::rbf && !out.bandwidth) out.bandwidth = X.rows() >= 2 ? median_bandwidth(X) : 1.0;
  return out;
}

namespace {

struct Evaluator
{
  KernelFamily family;
  double inv_two_sigma2 = 0.0;
  int degree = 1;
  double offset = 0.0;

  explicit Evaluator(const KernelSpec& spec)
      : family(spec.family), degree(spec.degree), offset(spec.offset)
  {
    if (family == KernelFamily::rbf) {
      const double sigma = spec.bandwidth.value_or(1.0);
      inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    }
  }

  template <typename X, typename Y>
  double operator()(const X& x, const Y& y) const
  {
    switch (family) {
    case KernelFamily::linear: return x.dot(y);
    case KernelFamily::rbf: return std::exp(-(x - y).squaredNorm() * inv_two_sigma2);
    case KernelFamily::polynomial: return std::pow(x.dot(y) + offset, degree);
    }
    return 0.0;
  }
};

void check_inputs(const Eigen::MatrixXd& X, const KernelSpec& spec)
{
  spec.validate();
  if (X.rows() < 1) throw DataError("kernel matrix needs at least one sample");
  if (!X.allFinite()) throw DataError("kernel input contains non-finite feature values");
}

} // namespace

double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    const Eigen::Ref<const Eigen::RowVectorXd>& y)
{
  return Evaluator(spec)(x, y);
}

GramMatrix kernel_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec, Eigen::Index source_count)
{
  check_inputs(X, spec);
  GramMatrix gram{Eigen::MatrixXd(X.rows(), X.rows()), resolve_bandwidth(spec, X), source_count};
  const Evaluator k(gram.spec);
  const Eigen::Index n = X.rows();
  // Column-major storage: fill the lower triangle column by column, mirror after.
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) gram.values(i, j) = k(X.row(i), X.row(j));
  gram.values.triangularView<Eigen::StrictlyUpper>() = gram.values.transpose();
  return gram;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const KernelSpec& spec)
{
  spec.validate();
  if (A.cols() != B.cols())
    throw DataError("cross_kernel: feature dimensions differ (" + std::to_string(A.cols()) + " vs " +
                    std::to_string(B.cols()) + ")");
  const Evaluator k(spec);
  Eigen::MatrixXd out(A.rows(), B.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < B.rows(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) out(i, j) = k(A.row(i), B.row(j));
  return out;
}

namespace serial {

GramMatrix kernel_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec, Eigen::Index source_count)
{
  check_inputs(X, spec);
  GramMatrix gram{Eigen::MatrixXd(X.rows(), X.rows()), resolve_bandwidth(spec, X), source_count};
  const Evaluator k(gram.spec);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.rows(); ++j) gram.values(i, j) = k(X.row(i), X.row(j));
  gram.values = (0.5 * (gram.values + gram.values.transpose())).eval();
  return gram;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const KernelSpec& spec)
{
  spec.validate();
  if (A.cols() != B.cols()) throw DataError("cross_kernel: feature dimensions differ");
  const Evaluator k(spec);
  Eigen::MatrixXd out(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j) out(i, j) = k(A.row(i), B.row(j));
  return out;
}

} // namespace serial

double median_bandwidth(const Eigen::MatrixXd& X)
{
  constexpr Eigen::Index max_points = 2000;
  const Eigen::Index n = X.rows();
  if (n < 2) return 1.0;

  std::vector<Eigen::Index> idx;
  if (n <= max_points) {
    idx.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  } else {
    idx.resize(max_points);
    for (Eigen::Index i = 0; i < max_points; ++i) idx[static_cast<std::size_t>(i)] = i * n / max_points;
  }

  const auto m = static_cast<Eigen::Index>(idx.size());
  std::vector<double> dist(static_cast<std::size_t>(m * (m - 1) / 2));
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < m; ++i) {
    // Offset of row i in the packed strict upper triangle.
    std::size_t p = static_cast<std::size_t>(i * m - i * (i + 1) / 2);
    for (Eigen::Index j = i + 1; j < m; ++j, ++p)
      dist[p] = (X.row(idx[static_cast<std::size_t>(i)]) - X.row(idx[static_cast<std::size_t>(j)])).norm();
  }

  const std::size_t half = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(half), dist.end());
  double median = dist[half];
  if (dist.size() % 2 == 0) {
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(half));
    median = 0.5 * (median + lower);
  }
  return median > 0.0 ? median : 1.0;
}

double default_jitter(const Eigen::MatrixXd& M)
{
  if (M.rows() == 0) return 0.0;
  return std::max(1e-8 * M.trace() / static_cast<double>(M.rows()), 1e-12);
}

} // namespace netda
