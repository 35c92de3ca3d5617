#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace netda {

enum class KernelFamily { linear, rbf, polynomial };

const char* to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

struct KernelSpec
{
  KernelFamily family = KernelFamily::rbf;
  /// RBF length scale sigma in exp(-|x-y|^2 / (2 sigma^2)); unset means
  /// "median heuristic", resolved against the data it is applied to.
  std::optional<double> bandwidth;
  int degree = 2;      // polynomial: (x.y + offset)^degree
  double offset = 1.0;

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

/// Copy of `spec` with the median-heuristic bandwidth filled in from `X`
/// (rbf only; other families are returned unchanged).
KernelSpec resolve_bandwidth(const KernelSpec& spec, const Eigen::MatrixXd& X);

double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    const Eigen::Ref<const Eigen::RowVectorXd>& y);

struct GramMatrix
{
  Eigen::MatrixXd values;
  KernelSpec spec;              // bandwidth always resolved
  Eigen::Index source_count = 0;

  Eigen::Index size() const { return values.rows(); }
};

/// K(i,j) = k(x_i, x_j) over the rows of X (source rows first, then target).
/// Rows are distributed over OpenMP threads; output is exactly symmetric and
/// independent of the thread count.
GramMatrix kernel_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec, Eigen::Index source_count = 0);

/// Entry (i,j) = k(a_i, b_j).
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const KernelSpec& spec);

/// Median pairwise Euclidean distance over i<j. Inputs above 2000 rows are
/// subsampled at evenly spaced indices. Returns 1 when the median is 0.
double median_bandwidth(const Eigen::MatrixXd& X);

/// 1e-8 * trace(M) / n, floored at 1e-12 so an all-zero matrix still gets a metric.
double default_jitter(const Eigen::MatrixXd& M);

namespace serial {
// Single-threaded reference implementations, kept for tests and benchmarks.
GramMatrix kernel_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec, Eigen::Index source_count = 0);
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const KernelSpec& spec);
} // namespace serial

} // namespace netda
