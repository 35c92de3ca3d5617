#pragma once

#include "netda/data.hpp"
#include "netda/eigsolve.hpp"
#include "netda/kernel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace netda {

struct HyperParams
{
  double alpha = 1.0; // MMD weight
  double beta = 1.0;  // embedding weight
  double gamma = 1.0; // Frobenius regularization
  int k = 20;         // projection dimension
  int iterations = 10;

  /// Throws ConfigError on negative weights, all-zero weights, k outside
  /// [1, n] or a non-positive iteration count.
  void validate(Eigen::Index n) const;
  bool operator==(const HyperParams&) const = default;
};

struct IterationRecord
{
  Labels pseudo_labels;
  std::optional<double> accuracy; // only when the target carries labels
  double mmd_cost = 0.0;
  double embedding_cost = 0.0;
  double objective = 0.0;       // alpha*mmd + beta*embedding + gamma*|A|_F^2
  double eigenvalue_sum = 0.0;
  double residual = 0.0;
  int label_changes = 0;        // pseudo labels that differ from the previous iteration
};

struct NetModel
{
  Eigen::MatrixXd coefficients; // A, n x k
  Eigen::VectorXd eigenvalues;
  KernelSpec kernel_spec;       // bandwidth resolved
  GramMatrix gram;
  HyperParams params;
  double jitter = 0.0;
  Labels initial_labels;        // input-space 1-NN pseudo labels
  std::optional<double> initial_accuracy;
  std::vector<IterationRecord> history;

  const Labels& predictions() const { return history.back().pseudo_labels; }
  Eigen::MatrixXd projected() const { return coefficients.transpose() * gram.values; }
};

struct LinearSystem
{
  Eigen::MatrixXd lhs;
  Eigen::MatrixXd rhs;
};

/// lhs = alpha K M K^T + beta K L K^T + gamma I, rhs = K D K^T (both symmetrized).
LinearSystem assemble_system(const Eigen::MatrixXd& K, const Eigen::MatrixXd& mmd_sum, const Eigen::MatrixXd& L,
                             const Eigen::VectorXd& degrees, const HyperParams& params);

/// Z = A^T K_block.
Eigen::MatrixXd project(const Eigen::MatrixXd& K_block, const Eigen::MatrixXd& A);

/// 1-nearest-neighbour labels for the columns of `test` given labelled
/// columns of `train`. Ties go to the lowest training index. Test columns are
/// split across OpenMP threads.
Labels nn_classify(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test);

namespace serial {
Labels nn_classify(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test);
} // namespace serial

struct BaselineResult
{
  Labels predicted;
  std::optional<double> accuracy;
};

struct FitOptions
{
  std::optional<double> jitter; // default 1e-8 * tr(rhs) / n
};

/// The parameter-independent part of a NET fit: Gram matrix, graph, the
/// Cholesky reduction of K D K^T and the reduced embedding and regularization
/// terms. One problem serves any number of HyperParams.
class NetProblem
{
public:
  NetProblem(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
             const FitOptions& options = {});

  NetModel fit(const HyperParams& params) const;

  Eigen::Index size() const { return gram_.size(); }
  const GramMatrix& gram() const { return gram_; }
  const Labels& initial_labels() const { return initial_.predicted; }

private:
  Eigen::Index ns_ = 0;
  Eigen::Index nt_ = 0;
  Labels source_labels_;
  std::optional<Labels> target_labels_;
  int num_classes_ = 0;
  GramMatrix gram_;
  Eigen::MatrixXd laplacian_;
  Eigen::MatrixXd klk_;         // K L K^T
  Eigen::MatrixXd reduced_klk_; // L^{-1} K L K^T L^{-T}
  Eigen::MatrixXd reduced_eye_; // L^{-1} L^{-T}
  std::optional<DefiniteReduction> reduction_;
  BaselineResult initial_;
};

/// Fits NET transductively on [source; target]. Target labels, when present,
/// are read only to fill the accuracy fields of the history.
NetModel net_fit(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
                 const HyperParams& params, const FitOptions& options = {});

/// 1-NN from source to target in the input feature space.
BaselineResult na_baseline(const LabeledDomain& source, const LabeledDomain& target);

} // namespace netda
