#pragma once

#include "netda/data.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace netda {

/// Marginal (m0) and class-conditional MMD coefficient matrices over the
/// stacked [source; target] sample order. Every matrix is the outer product
/// v v^T of a signed indicator vector; those vectors are kept in `factors`
/// (column 0 for m0, column c for class c) so that sum = factors * factors^T.
struct MmdSet
{
  Eigen::MatrixXd m0;
  std::vector<Eigen::MatrixXd> per_class; // filled only when requested
  Eigen::MatrixXd sum;
  Eigen::MatrixXd factors;                // n x (C+1)
  std::vector<std::pair<int, int>> class_counts; // (n_s^(c), n_t^(c)) for c = 1..C
};

/// v0 = [1/n_s repeated n_s, -1/n_t repeated n_t].
Eigen::VectorXd m0_vector(Eigen::Index n_source, Eigen::Index n_target);

/// Indicator vector of class c: 1/n_s^(c) on source members, -1/n_t^(c) on
/// target members. Zero when either side has no member of the class.
Eigen::VectorXd mc_vector(const Labels& source_labels, const Labels& target_labels, int c);

Eigen::MatrixXd build_m0(Eigen::Index n_source, Eigen::Index n_target);
Eigen::MatrixXd build_mc(const Labels& source_labels, const Labels& target_labels, int c);

MmdSet build_mmd_set(const Labels& source_labels, const Labels& target_labels, int num_classes,
                     bool keep_per_class = false);

/// tr(Z M Z^T) for projected data Z (k x n).
double mmd_cost(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& M);

} // namespace netda
