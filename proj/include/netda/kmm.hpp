#pragma once

#include "netda/data.hpp"
#include "netda/kernel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace netda {

struct KmmConfig
{
  double B = 1000.0;
  std::optional<double> epsilon; // unset: (sqrt(n_s) - 1) / sqrt(n_s)
  int max_iterations = 10000;
  double tolerance = 1e-6;       // scaled by n_s
  bool record_history = false;
};

struct KmmResult
{
  Eigen::VectorXd weights;
  double objective = 0.0;
  int iterations_used = 0;
  bool feasible = true;
  bool converged = false;
  double B = 0.0;
  double epsilon = 0.0;
  std::vector<double> objective_history; // one entry per accepted step, when recorded
};

struct ValidationSplit
{
  std::vector<Eigen::Index> validation_indices; // descending weight, ties by lower index
  std::vector<Eigen::Index> train_indices;      // ascending
  double fraction = 0.0;
};

double default_kmm_epsilon(Eigen::Index n_source);

/// Euclidean projection of y onto {0 <= w <= B} intersected with
/// {lower <= sum(w) <= upper}. The result is clip(y - tau, 0, B) for a scalar
/// shift tau found by bisection.
Eigen::VectorXd project_box_slab(const Eigen::VectorXd& y, double B, double lower, double upper);

/// min 1/2 w^T Ks w - kappa^T w  s.t. 0 <= w_i <= B, |sum w - n_s| <= n_s eps,
/// by projected gradient with Barzilai-Borwein trial steps and a monotone
/// backtracking line search.
KmmResult solve_kmm_qp(const Eigen::MatrixXd& Ks, const Eigen::VectorXd& kappa, const KmmConfig& config);

KmmResult kmm_weights(const Eigen::MatrixXd& source_features, const Eigen::MatrixXd& target_features,
                      const KernelSpec& spec, const KmmConfig& config = {});

KmmResult kmm_weights(const Eigen::MatrixXd& source_features, const Eigen::MatrixXd& target_features,
                      const KernelSpec& spec, double B, double epsilon);

/// Top round(fraction * n_s) source samples by weight become the validation set.
ValidationSplit select_validation(const LabeledDomain& source, const Eigen::VectorXd& weights, double fraction);

} // namespace netda
