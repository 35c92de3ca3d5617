#include "netda/modelsel.hpp"
#include "netda/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <tuple>

namespace netda {

const char* to_string(SearchMode mode)
{
  return mode == SearchMode::full ? "full" : "coordinate";
}

SearchMode parse_search_mode(const std::string& name)
{
  if (name == "full") return SearchMode::full;
  if (name == "coordinate") return SearchMode::coordinate;
  throw ConfigError("unknown search mode '" + name + "' (expected full or coordinate)");
}

void GridSpec::set_weight_grid(const std::vector<double>& weights)
{
  alpha_grid = beta_grid = gamma_grid = weights;
}

void GridSpec::validate() const
{
  if (k_grid.empty() || alpha_grid.empty() || beta_grid.empty() || gamma_grid.empty())
    throw ConfigError("parameter grids must be nonempty");
  for (int k : k_grid)
    if (k < 1) throw ConfigError("k grid values must be positive");
  for (const auto* g : {&alpha_grid, &beta_grid, &gamma_grid})
    for (double w : *g)
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weight grid values must be finite and nonnegative");
  auto has_positive = [](const std::vector<double>& g) {
    return std::any_of(g.begin(), g.end(), [](double w) { return w > 0.0; });
  };
  if (!has_positive(alpha_grid) && !has_positive(beta_grid) && !has_positive(gamma_grid))
    throw ConfigError("weight grids admit no configuration with a positive weight");
  if (iterations < 1) throw ConfigError("iterations must be positive");
}

bool params_less(const HyperParams& a, const HyperParams& b)
{
  return std::tie(a.k, a.alpha, a.beta, a.gamma) < std::tie(b.k, b.alpha, b.beta, b.gamma);
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename T>
T nearest(const std::vector<T>& grid, T value)
{
  // grid is sorted, so the first minimum is the smaller value on ties
  return *std::min_element(grid.begin(), grid.end(), [&](T a, T b) {
    return std::abs(static_cast<double>(a) - static_cast<double>(value)) <
           std::abs(static_cast<double>(b) - static_cast<double>(value));
  });
}

using Key = std::tuple<int, double, double, double>;

Key key_of(const HyperParams& p) { return {p.k, p.alpha, p.beta, p.gamma}; }

// Higher score wins; equal scores fall back to the value ordering.
bool better(const ScoreRow& a, const ScoreRow& b)
{
  if (a.score.has_value() != b.score.has_value()) return a.score.has_value();
  if (a.score && *a.score != *b.score) return *a.score > *b.score;
  return params_less(a.params, b.params);
}

class Evaluator
{
public:
  Evaluator(const std::vector<DomainPair>& pairs, const KernelSpec& spec) : pairs_(pairs)
  {
    problems_.reserve(pairs.size());
    for (const auto& p : pairs) {
      if (!p.train_source.labels) throw DataError("grid search needs a labelled training source");
      if (!p.validation_source.labels) throw DataError("grid search needs validation labels for scoring");
      // Validation rows are presented unlabelled, stacked ahead of the target.
      const LabeledDomain unlabeled = stack(strip_labels(p.validation_source), strip_labels(p.target), "selection");
      problems_.push_back(std::make_unique<NetProblem>(p.train_source, unlabeled, spec));
    }
  }

  ScoreRow evaluate(const HyperParams& params) const
  {
    ScoreRow row{params, std::nullopt, {}};
    try {
      double total = 0.0;
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const NetModel model = problems_[i]->fit(params);
        const Labels& truth = *pairs_[i].validation_source.labels;
        const Labels& pred = model.predictions();
        const Labels head(pred.begin(), pred.begin() + static_cast<std::ptrdiff_t>(truth.size()));
        total += accuracy(head, truth);
      }
      row.score = total / static_cast<double>(pairs_.size());
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  }

  /// Evaluates configurations not seen before; results land in `table`.
  void evaluate_all(const std::vector<HyperParams>& configs, std::map<Key, ScoreRow>& table, int jobs) const
  {
    std::vector<HyperParams> todo;
    for (const auto& c : configs)
      if (!table.count(key_of(c)) &&
          std::none_of(todo.begin(), todo.end(), [&](const HyperParams& t) { return key_of(t) == key_of(c); }))
        todo.push_back(c);

    std::vector<ScoreRow> rows(todo.size());
    const auto count = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1))
    for (long i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = evaluate(todo[static_cast<std::size_t>(i)]);
    for (auto& r : rows) table.emplace(key_of(r.params), std::move(r));
  }

private:
  const std::vector<DomainPair>& pairs_;
  std::vector<std::unique_ptr<NetProblem>> problems_;
};

} // namespace

SelectionReport grid_search(const std::vector<DomainPair>& pairs, const KernelSpec& spec, const GridSpec& grid,
                            int jobs)
{
  grid.validate();
  if (pairs.empty()) throw ConfigError("grid search needs at least one domain pair");

  const auto ks = sorted_unique(grid.k_grid);
  const auto as = sorted_unique(grid.alpha_grid);
  const auto bs = sorted_unique(grid.beta_grid);
  const auto gs = sorted_unique(grid.gamma_grid);

  const Evaluator evaluator(pairs, spec);
  std::map<Key, ScoreRow> table;
  auto make = [&](int k, double a, double b, double g) {
    HyperParams p;
    p.k = k;
    p.alpha = a;
    p.beta = b;
    p.gamma = g;
    p.iterations = grid.iterations;
    return p;
  };

  if (grid.mode == SearchMode::full) {
    std::vector<HyperParams> all;
    for (int k : ks)
      for (double a : as)
        for (double b : bs)
          for (double g : gs) all.push_back(make(k, a, b, g));
    evaluator.evaluate_all(all, table, jobs);
  } else {
    const HyperParams defaults;
    HyperParams current = make(nearest(ks, defaults.k), nearest(as, defaults.alpha), nearest(bs, defaults.beta),
                               nearest(gs, defaults.gamma));
    for (int pass = 0; pass < 2; ++pass) {
      for (int which = 0; which < 4; ++which) {
        std::vector<HyperParams> sweep;
        auto push = [&](HyperParams p) { sweep.push_back(p); };
        if (which == 0)
          for (int k : ks) push(make(k, current.alpha, current.beta, current.gamma));
        if (which == 1)
          for (double a : as) push(make(current.k, a, current.beta, current.gamma));
        if (which == 2)
          for (double b : bs) push(make(current.k, current.alpha, b, current.gamma));
        if (which == 3)
          for (double g : gs) push(make(current.k, current.alpha, current.beta, g));
        evaluator.evaluate_all(sweep, table, jobs);

        const ScoreRow* best = nullptr;
        for (const auto& p : sweep) {
          const ScoreRow& row = table.at(key_of(p));
          if (!best || better(row, *best)) best = &row;
        }
        if (best && best->score) current = best->params;
      }
    }
  }

  SelectionReport report;
  report.mode = grid.mode;
  for (auto& [key, row] : table) report.scores.push_back(row);
  const ScoreRow* best = nullptr;
  for (const auto& row : report.scores)
    if (!best || better(row, *best)) best = &row;
  if (!best || !best->score) throw NumericalError("every grid configuration failed" +
                                                  (best ? ": " + best->error : std::string()));
  report.best_params = best->params;
  report.best_score = *best->score;
  return report;
}

SelectionReport grid_search(const LabeledDomain& train_source, const LabeledDomain& validation_source,
                            const LabeledDomain& target, const KernelSpec& spec, const GridSpec& grid, int jobs)
{
  std::vector<DomainPair> pairs{{train_source, validation_source, target}};
  return grid_search(pairs, spec, grid, jobs);
}

DomainPair make_selection_pair(const LabeledDomain& source, const LabeledDomain& target, const ValidationSplit& split)
{
  return {subset(source, split.train_indices), subset(source, split.validation_indices), strip_labels(target)};
}

PipelineResult validate_pipeline(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
                                 const GridSpec& grid, const ValidationConfig& config, int jobs)
{
  if (!source.labels) throw DataError("validation pipeline needs a labelled source");
  // One bandwidth for the weighting, every selection fit and the final refit.
  const KernelSpec resolved = resolve_bandwidth(spec, stack_rows(source.features, target.features));

  PipelineResult out;
  out.kmm = kmm_weights(source.features, target.features, resolved, config.kmm);
  out.split = select_validation(source, out.kmm.weights, config.fraction);
  const std::vector<DomainPair> pairs{make_selection_pair(source, target, out.split)};
  out.selection = grid_search(pairs, resolved, grid, jobs);
  out.model = net_fit(source, target, resolved, out.selection.best_params);
  return out;
}

} // namespace netda
