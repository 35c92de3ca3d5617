#include "netda/kmm.hpp"
#include "netda/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace netda {

double default_kmm_epsilon(Eigen::Index n_source)
{
  const double r = std::sqrt(static_cast<double>(n_source));
  return (r - 1.0) / r;
}

Eigen::VectorXd project_box_slab(const Eigen::VectorXd& y, double B, double lower, double upper)
{
  auto clipped = [&](double tau) { return (y.array() - tau).max(0.0).min(B).matrix().eval(); };
  auto total = [&](double tau) { return (y.array() - tau).max(0.0).min(B).sum(); };

  const double s0 = total(0.0);
  if (s0 >= lower && s0 <= upper) return clipped(0.0);

  // total(tau) is nonincreasing in tau; bracket the crossing of the violated bound.
  const double goal = s0 > upper ? upper : lower;
  double lo = y.minCoeff() - B; // total(lo) = n*B
  double hi = y.maxCoeff();     // total(hi) = 0
  // Keep `feasible_end` on the side that satisfies the violated bound.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (total(mid) >= goal)
      lo = mid;
    else
      hi = mid;
  }
  return clipped(s0 > upper ? hi : lo);
}

namespace {

double qp_objective(const Eigen::MatrixXd& Ks, const Eigen::VectorXd& kappa, const Eigen::VectorXd& w)
{
  return 0.5 * w.dot(Ks * w) - kappa.dot(w);
}

} // namespace

KmmResult solve_kmm_qp(const Eigen::MatrixXd& Ks, const Eigen::VectorXd& kappa, const KmmConfig& config)
{
  const Eigen::Index n = Ks.rows();
  if (n < 1 || Ks.cols() != n || kappa.size() != n) throw DataError("KMM: kernel and kappa sizes disagree");
  const double eps = config.epsilon.value_or(default_kmm_epsilon(n));
  if (!(config.B > 0.0)) throw ConfigError("KMM bound B must be positive");
  if (!(eps >= 0.0)) throw ConfigError("KMM epsilon must be nonnegative");

  const double ns = static_cast<double>(n);
  const double lower = ns * (1.0 - eps);
  const double upper = ns * (1.0 + eps);
  if (config.B * ns < lower)
    throw ConfigError("KMM constraints are infeasible: B*n_s = " + std::to_string(config.B * ns) +
                      " < n_s(1-eps) = " + std::to_string(lower));

  KmmResult r;
  r.B = config.B;
  r.epsilon = eps;

  auto project = [&](const Eigen::VectorXd& v) { return project_box_slab(v, config.B, lower, upper); };

  Eigen::VectorXd w = project(Eigen::VectorXd::Ones(n));
  Eigen::VectorXd grad = Ks * w - kappa;
  double f = qp_objective(Ks, kappa, w);
  if (config.record_history) r.objective_history.push_back(f);

  const double tol = config.tolerance * ns;
  double step = 1.0 / std::max(Ks.diagonal().sum(), 1e-12); // 1/trace <= 1/lambda_max
  Eigen::VectorXd w_prev, grad_prev;

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    if ((w - project(w - grad)).norm() <= tol) {
      r.converged = true;
      break;
    }
    if (it > 0) {
      const Eigen::VectorXd s = w - w_prev;
      const Eigen::VectorXd yv = grad - grad_prev;
      const double sy = s.dot(yv);
      if (sy > 0.0) step = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
    }

    // Backtrack until the projected step gives sufficient decrease.
    Eigen::VectorXd w_new;
    double f_new = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      w_new = project(w - step * grad);
      const Eigen::VectorXd d = w_new - w;
      f_new = qp_objective(Ks, kappa, w_new);
      if (f_new <= f + grad.dot(d) + d.squaredNorm() / (2.0 * step) + 1e-14 * std::abs(f)) break;
      step *= 0.5;
    }
    if (f_new > f) { // no progress possible at machine precision
      r.converged = true;
      break;
    }

    w_prev = std::move(w);
    grad_prev = std::move(grad);
    w = std::move(w_new);
    grad = Ks * w - kappa;
    f = f_new;
    if (config.record_history) r.objective_history.push_back(f);
  }

  r.weights = std::move(w);
  r.objective = f;
  r.iterations_used = it;
  const double sum = r.weights.sum();
  r.feasible = r.weights.minCoeff() >= 0.0 && r.weights.maxCoeff() <= config.B &&
               std::abs(sum - ns) <= ns * eps + 1e-6;
  return r;
}

KmmResult kmm_weights(const Eigen::MatrixXd& source_features, const Eigen::MatrixXd& target_features,
                      const KernelSpec& spec, const KmmConfig& config)
{
  if (source_features.rows() < 1 || target_features.rows() < 1) throw DataError("KMM needs nonempty domains");
  const KernelSpec resolved = resolve_bandwidth(spec, stack_rows(source_features, target_features));
  Eigen::MatrixXd Ks = kernel_matrix(source_features, resolved).values;
  Ks.diagonal().array() += default_jitter(Ks);
  const double ratio = static_cast<double>(source_features.rows()) / static_cast<double>(target_features.rows());
  const Eigen::VectorXd kappa = ratio * cross_kernel(source_features, target_features, resolved).rowwise().sum();
  return solve_kmm_qp(Ks, kappa, config);
}

KmmResult kmm_weights(const Eigen::MatrixXd& source_features, const Eigen::MatrixXd& target_features,
                      const KernelSpec& spec, double B, double epsilon)
{
  KmmConfig config;
  config.B = B;
  config.epsilon = epsilon;
  return kmm_weights(source_features, target_features, spec, config);
}

ValidationSplit select_validation(const LabeledDomain& source, const Eigen::VectorXd& weights, double fraction)
{
  const Eigen::Index n = source.size();
  if (weights.size() != n) throw DataError("select_validation: weight count does not match source size");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("validation fraction must lie in (0, 1)");

  auto count = static_cast<Eigen::Index>(std::lround(fraction * static_cast<double>(n)));
  // Both sides of the split must be usable for fitting and scoring.
  if (n >= 2) count = std::clamp<Eigen::Index>(count, 1, n - 1);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return weights(a) > weights(b); });

  ValidationSplit split;
  split.fraction = fraction;
  split.validation_indices.assign(order.begin(), order.begin() + count);
  split.train_indices.assign(order.begin() + count, order.end());
  std::sort(split.train_indices.begin(), split.train_indices.end());
  return split;
}

} // namespace netda
