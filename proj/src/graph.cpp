#include "netda/graph.hpp"
#include "netda/error.hpp"

#include <cmath>

namespace netda {

Eigen::MatrixXd build_adjacency(const Labels& source_labels, Eigen::Index n_target)
{
  const auto ns = static_cast<Eigen::Index>(source_labels.size());
  const Eigen::Index n = ns + n_target;
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < ns; ++j)
    for (Eigen::Index i = 0; i < ns; ++i)
      if (source_labels[static_cast<std::size_t>(i)] == source_labels[static_cast<std::size_t>(j)]) W(i, j) = 1.0;
  return W;
}

SimilarityGraph normalized_laplacian(const Eigen::MatrixXd& W)
{
  if (W.rows() != W.cols()) throw DataError("adjacency must be square");
  SimilarityGraph g;
  g.adjacency = W;
  g.degrees = W.rowwise().sum();
  for (Eigen::Index i = 0; i < g.degrees.size(); ++i)
    if (!(g.degrees(i) > 0.0)) throw DataError("adjacency row " + std::to_string(i) + " has zero degree");

  const Eigen::VectorXd inv_sqrt = g.degrees.array().sqrt().inverse();
  g.laplacian = -(inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal());
  g.laplacian.diagonal().array() += 1.0;
  g.laplacian = (0.5 * (g.laplacian + g.laplacian.transpose())).eval();
  return g;
}

double embedding_cost(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& L)
{
  if (L.rows() != L.cols() || Z.cols() != L.rows())
    throw DataError("embedding_cost: Z has " + std::to_string(Z.cols()) + " columns but L is " +
                    std::to_string(L.rows()) + "x" + std::to_string(L.cols()));
  return (Z * L).cwiseProduct(Z).sum();
}

} // namespace netda
