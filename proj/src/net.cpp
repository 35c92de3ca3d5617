#include "netda/net.hpp"
#include "netda/error.hpp"
#include "netda/graph.hpp"
#include "netda/mmd.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace netda {

void HyperParams::validate(Eigen::Index n) const
{
  auto ok = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!ok(alpha) || !ok(beta) || !ok(gamma)) throw ConfigError("alpha, beta and gamma must be finite and nonnegative");
  if (alpha == 0.0 && beta == 0.0 && gamma == 0.0) throw ConfigError("at least one of alpha, beta, gamma must be positive");
  if (k < 1 || k > n)
    throw ConfigError("projection dimension k=" + std::to_string(k) + " must lie in [1, n=" + std::to_string(n) + "]");
  if (iterations < 1) throw ConfigError("iterations must be positive");
}

LinearSystem assemble_system(const Eigen::MatrixXd& K, const Eigen::MatrixXd& mmd_sum, const Eigen::MatrixXd& L,
                             const Eigen::VectorXd& degrees, const HyperParams& params)
{
  const Eigen::Index n = K.rows();
  if (K.cols() != n || mmd_sum.rows() != n || mmd_sum.cols() != n || L.rows() != n || L.cols() != n ||
      degrees.size() != n)
    throw DataError("assemble_system: all matrices must be " + std::to_string(n) + "x" + std::to_string(n));

  LinearSystem sys;
  sys.lhs = Eigen::MatrixXd::Identity(n, n) * params.gamma;
  if (params.alpha != 0.0) sys.lhs.noalias() += params.alpha * (K * mmd_sum * K.transpose());
  if (params.beta != 0.0) sys.lhs.noalias() += params.beta * (K * L * K.transpose());
  sys.rhs = K * degrees.asDiagonal() * K.transpose();
  sys.lhs = (0.5 * (sys.lhs + sys.lhs.transpose())).eval();
  sys.rhs = (0.5 * (sys.rhs + sys.rhs.transpose())).eval();
  return sys;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& K_block, const Eigen::MatrixXd& A)
{
  if (K_block.rows() != A.rows())
    throw DataError("project: kernel block has " + std::to_string(K_block.rows()) + " rows, coefficients " +
                    std::to_string(A.rows()));
  return A.transpose() * K_block;
}

namespace {

void check_nn_inputs(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test)
{
  if (train.cols() < 1) throw DataError("nearest-neighbour classifier needs a nonempty training set");
  if (static_cast<Eigen::Index>(train_labels.size()) != train.cols())
    throw DataError("nearest-neighbour classifier: label count does not match training columns");
  if (train.rows() != test.rows()) throw DataError("nearest-neighbour classifier: train and test dimensions differ");
}

int nearest_label(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test,
                  Eigen::Index p)
{
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index arg = 0;
  for (Eigen::Index m = 0; m < train.cols(); ++m) {
    const double d = (train.col(m) - test.col(p)).squaredNorm();
    if (d < best) {
      best = d;
      arg = m;
    }
  }
  return train_labels[static_cast<std::size_t>(arg)];
}

} // namespace

Labels nn_classify(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test)
{
  check_nn_inputs(train, train_labels, test);
  Labels out(static_cast<std::size_t>(test.cols()));
#pragma omp parallel for schedule(static)
  for (Eigen::Index p = 0; p < test.cols(); ++p)
    out[static_cast<std::size_t>(p)] = nearest_label(train, train_labels, test, p);
  return out;
}

namespace serial {

Labels nn_classify(const Eigen::MatrixXd& train, const Labels& train_labels, const Eigen::MatrixXd& test)
{
  check_nn_inputs(train, train_labels, test);
  Labels out(static_cast<std::size_t>(test.cols()));
  for (Eigen::Index p = 0; p < test.cols(); ++p) {
    Eigen::Index arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < train.cols(); ++m) {
      double d = 0.0;
      for (Eigen::Index r = 0; r < train.rows(); ++r) d += (train(r, m) - test(r, p)) * (train(r, m) - test(r, p));
      if (d < best) {
        best = d;
        arg = m;
      }
    }
    out[static_cast<std::size_t>(p)] = train_labels[static_cast<std::size_t>(arg)];
  }
  return out;
}

} // namespace serial

BaselineResult na_baseline(const LabeledDomain& source, const LabeledDomain& target)
{
  if (!source.labels) throw DataError("NA baseline needs a labelled source");
  BaselineResult r;
  r.predicted = nn_classify(source.features.transpose(), *source.labels, target.features.transpose());
  if (target.labels) r.accuracy = accuracy(r.predicted, *target.labels);
  return r;
}

NetProblem::NetProblem(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
                       const FitOptions& options)
{
  if (!source.labels) throw DataError("net_fit needs a labelled source domain");
  source.validate();
  target.validate();
  ns_ = source.size();
  nt_ = target.size();
  source_labels_ = *source.labels;
  target_labels_ = target.labels;
  num_classes_ = source.num_classes();

  gram_ = kernel_matrix(stack_rows(source.features, target.features), spec, ns_);
  const Eigen::MatrixXd& K = gram_.values;
  const Eigen::Index n = ns_ + nt_;

  const SimilarityGraph graph = normalized_laplacian(build_adjacency(source_labels_, nt_));
  laplacian_ = graph.laplacian;
  Eigen::MatrixXd rhs = K * graph.degrees.asDiagonal() * K;
  rhs = (0.5 * (rhs + rhs.transpose())).eval();
  reduction_.emplace(rhs, options.jitter.value_or(default_jitter(rhs)));

  klk_ = K * laplacian_ * K;
  klk_ = (0.5 * (klk_ + klk_.transpose())).eval();
  reduced_klk_ = reduction_->reduce(klk_);
  reduced_eye_ = reduction_->reduce(Eigen::MatrixXd::Identity(n, n));

  initial_ = na_baseline(source, target);
}

NetModel NetProblem::fit(const HyperParams& params) const
{
  const Eigen::Index n = ns_ + nt_;
  params.validate(n);
  const Eigen::MatrixXd& K = gram_.values;

  NetModel model;
  model.params = params;
  model.gram = gram_;
  model.kernel_spec = gram_.spec;
  model.jitter = reduction_->jitter();
  model.initial_labels = initial_.predicted;
  model.initial_accuracy = initial_.accuracy;

  // Only the MMD term changes across iterations.
  Eigen::MatrixXd lhs_fixed = params.beta * klk_;
  lhs_fixed.diagonal().array() += params.gamma;
  const Eigen::MatrixXd reduced_fixed = params.beta * reduced_klk_ + params.gamma * reduced_eye_;

  Labels pseudo = initial_.predicted;
  model.history.reserve(static_cast<std::size_t>(params.iterations));
  for (int it = 0; it < params.iterations; ++it) {
    const MmdSet mmd = build_mmd_set(source_labels_, pseudo, num_classes_);

    Eigen::MatrixXd lhs = lhs_fixed;
    Eigen::MatrixXd reduced = reduced_fixed;
    if (params.alpha != 0.0) {
      // K M K^T = (K V)(K V)^T with V the class indicator factors.
      const Eigen::MatrixXd KV = K * mmd.factors;
      const Eigen::MatrixXd U = reduction_->apply_inverse_factor(KV);
      lhs.noalias() += params.alpha * KV * KV.transpose();
      reduced.noalias() += params.alpha * U * U.transpose();
    }
    reduced = (0.5 * (reduced + reduced.transpose())).eval();

    EigenSolution sol;
    try {
      sol = reduction_->solve_reduced(reduced, lhs, params.k);
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(it + 1) + ": " + e.what());
    }

    const Eigen::MatrixXd Z = sol.vectors.transpose() * K;
    Labels next = nn_classify(Z.leftCols(ns_), source_labels_, Z.rightCols(nt_));

    IterationRecord rec;
    rec.mmd_cost = mmd_cost(Z, mmd.sum);
    rec.embedding_cost = embedding_cost(Z, laplacian_);
    rec.objective = params.alpha * rec.mmd_cost + params.beta * rec.embedding_cost +
                    params.gamma * sol.vectors.squaredNorm();
    rec.eigenvalue_sum = sol.values.sum();
    rec.residual = sol.residual;
    for (std::size_t i = 0; i < next.size(); ++i) rec.label_changes += next[i] != pseudo[i];
    if (target_labels_) rec.accuracy = accuracy(next, *target_labels_);
    rec.pseudo_labels = next;
    model.history.push_back(std::move(rec));

    pseudo = std::move(next);
    model.coefficients = std::move(sol.vectors);
    model.eigenvalues = std::move(sol.values);
  }
  return model;
}

NetModel net_fit(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
                 const HyperParams& params, const FitOptions& options)
{
  params.validate(source.size() + target.size());
  return NetProblem(source, target, spec, options).fit(params);
}

} // namespace netda
