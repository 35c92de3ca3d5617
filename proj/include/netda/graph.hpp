#pragma once

#include "netda/data.hpp"

#include <Eigen/Dense>

namespace netda {

struct SimilarityGraph
{
  Eigen::MatrixXd adjacency; // binary, W_ii = 1
  Eigen::VectorXd degrees;   // d_i = sum_j W_ij
  Eigen::MatrixXd laplacian; // I - D^{-1/2} W D^{-1/2}
};

/// W_ij = 1 when i == j or when both i and j are source samples with the same
/// label. Target rows (labels unknown) carry only their self-edge.
Eigen::MatrixXd build_adjacency(const Labels& source_labels, Eigen::Index n_target);

SimilarityGraph normalized_laplacian(const Eigen::MatrixXd& W);

/// tr(Z L Z^T) for projected data Z (k x n).
double embedding_cost(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& L);

} // namespace netda
