#include "netda/mmd.hpp"
#include "netda/error.hpp"

#include <algorithm>

namespace netda {

Eigen::VectorXd m0_vector(Eigen::Index n_source, Eigen::Index n_target)
{
  if (n_source < 1 || n_target < 1) throw DataError("M0 needs at least one source and one target sample");
  Eigen::VectorXd v(n_source + n_target);
  v.head(n_source).setConstant(1.0 / static_cast<double>(n_source));
  v.tail(n_target).setConstant(-1.0 / static_cast<double>(n_target));
  return v;
}

Eigen::VectorXd mc_vector(const Labels& source_labels, const Labels& target_labels, int c)
{
  const auto ns = static_cast<Eigen::Index>(source_labels.size());
  const auto nt = static_cast<Eigen::Index>(target_labels.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ns + nt);

  const auto count_s = std::count(source_labels.begin(), source_labels.end(), c);
  const auto count_t = std::count(target_labels.begin(), target_labels.end(), c);
  if (count_s == 0 || count_t == 0) return v; // class term skipped

  const double ws = 1.0 / static_cast<double>(count_s);
  const double wt = -1.0 / static_cast<double>(count_t);
  for (Eigen::Index i = 0; i < ns; ++i)
    if (source_labels[static_cast<std::size_t>(i)] == c) v(i) = ws;
  for (Eigen::Index i = 0; i < nt; ++i)
    if (target_labels[static_cast<std::size_t>(i)] == c) v(ns + i) = wt;
  return v;
}

namespace {

// Adds the case constants of one class term directly (1/(a*a), -1/(a*b))
// rather than via the outer product, so entries match the case definition
// bit for bit.
void add_class_term(Eigen::MatrixXd& M, const std::vector<Eigen::Index>& src, const std::vector<Eigen::Index>& tgt)
{
  if (src.empty() || tgt.empty()) return;
  const double a = static_cast<double>(src.size());
  const double b = static_cast<double>(tgt.size());
  const double ss = 1.0 / (a * a), tt = 1.0 / (b * b), st = -1.0 / (a * b);
  for (auto j : src) {
    for (auto i : src) M(i, j) += ss;
    for (auto i : tgt) M(i, j) += st;
  }
  for (auto j : tgt) {
    for (auto i : src) M(i, j) += st;
    for (auto i : tgt) M(i, j) += tt;
  }
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> members(const Labels& source_labels,
                                                                        const Labels& target_labels, int c)
{
  std::vector<Eigen::Index> src, tgt;
  const auto ns = static_cast<Eigen::Index>(source_labels.size());
  for (std::size_t i = 0; i < source_labels.size(); ++i)
    if (source_labels[i] == c) src.push_back(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < target_labels.size(); ++i)
    if (target_labels[i] == c) tgt.push_back(ns + static_cast<Eigen::Index>(i));
  return {std::move(src), std::move(tgt)};
}

std::vector<Eigen::Index> iota_indices(Eigen::Index first, Eigen::Index count)
{
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = first + i;
  return idx;
}

} // namespace

Eigen::MatrixXd build_m0(Eigen::Index n_source, Eigen::Index n_target)
{
  if (n_source < 1 || n_target < 1) throw DataError("M0 needs at least one source and one target sample");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_source + n_target, n_source + n_target);
  add_class_term(M, iota_indices(0, n_source), iota_indices(n_source, n_target));
  return M;
}

Eigen::MatrixXd build_mc(const Labels& source_labels, const Labels& target_labels, int c)
{
  const auto n = static_cast<Eigen::Index>(source_labels.size() + target_labels.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const auto [src, tgt] = members(source_labels, target_labels, c);
  add_class_term(M, src, tgt);
  return M;
}

MmdSet build_mmd_set(const Labels& source_labels, const Labels& target_labels, int num_classes, bool keep_per_class)
{
  if (num_classes < 1) throw DataError("MMD set needs at least one class");
  const auto ns = static_cast<Eigen::Index>(source_labels.size());
  const auto nt = static_cast<Eigen::Index>(target_labels.size());

  MmdSet set;
  set.factors.resize(ns + nt, num_classes + 1);
  set.factors.col(0) = m0_vector(ns, nt);
  set.m0 = build_m0(ns, nt);
  set.sum = set.m0;
  set.class_counts.reserve(static_cast<std::size_t>(num_classes));
  // Summed in class order so the result does not depend on scheduling.
  for (int c = 1; c <= num_classes; ++c) {
    const auto [src, tgt] = members(source_labels, target_labels, c);
    set.class_counts.emplace_back(static_cast<int>(src.size()), static_cast<int>(tgt.size()));
    set.factors.col(c) = mc_vector(source_labels, target_labels, c);
    if (keep_per_class) {
      Eigen::MatrixXd Mc = Eigen::MatrixXd::Zero(ns + nt, ns + nt);
      add_class_term(Mc, src, tgt);
      set.sum += Mc;
      set.per_class.push_back(std::move(Mc));
    } else {
      add_class_term(set.sum, src, tgt);
    }
  }
  return set;
}

double mmd_cost(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& M)
{
  if (M.rows() != M.cols() || Z.cols() != M.rows())
    throw DataError("mmd_cost: Z has " + std::to_string(Z.cols()) + " columns but M is " +
                    std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  return (Z * M).cwiseProduct(Z).sum();
}

} // namespace netda
