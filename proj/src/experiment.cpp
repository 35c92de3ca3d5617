#include "netda/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

namespace netda {

using nlohmann::json;

double percent(double fraction)
{
  return std::round(fraction * 10000.0) / 100.0;
}

void ExperimentConfig::validate() const
{
  if (params && grid) throw ConfigError("give either fixed parameters or a parameter grid, not both");
  if (!params && !grid) throw ConfigError("neither fixed parameters nor a parameter grid given");
  if (synthetic && !pairs.empty()) throw ConfigError("synthetic data and input files are mutually exclusive");
  if (!synthetic && pairs.empty()) throw ConfigError("no input: give --source/--target or --synthetic");
  if (!synthetic && !label_column) throw ConfigError("--labels is required for file input");
  if (pairs.size() > 1 && !grid) throw ConfigError("several domain pairs are only supported for grid search");
  if (jobs < 1) throw ConfigError("--jobs must be positive");
  kernel.validate();
  if (params && params->iterations < 1) throw ConfigError("--iters must be positive");
  if (params && params->k < 1) throw ConfigError("--k must be positive");
  if (params && (params->alpha < 0 || params->beta < 0 || params->gamma < 0))
    throw ConfigError("alpha, beta and gamma must be nonnegative");
  if (grid) grid->validate();
  if (preprocess.pca_dims && *preprocess.pca_dims < 1) throw ConfigError("--pca must be positive");
  if (!(validation.fraction > 0.0 && validation.fraction < 1.0)) throw ConfigError("--val-fraction must lie in (0, 1)");
  if (!(validation.kmm.B > 0.0)) throw ConfigError("--kmm-b must be positive");
  if (validation.kmm.epsilon && *validation.kmm.epsilon < 0.0) throw ConfigError("--kmm-eps must be nonnegative");
  if (synthetic) {
    if (synthetic->classes < 2) throw ConfigError("synthetic data needs at least 2 classes");
    if (synthetic->n_source < synthetic->classes || synthetic->n_target < synthetic->classes)
      throw ConfigError("synthetic sample counts must be at least the class count");
    if (synthetic->dim < 1) throw ConfigError("synthetic dim must be positive");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const char* to_string(StandardizeMode m)
{
  switch (m) {
  case StandardizeMode::none: return "none";
  case StandardizeMode::source: return "source";
  case StandardizeMode::pooled: return "pooled";
  }
  return "none";
}

json params_json(const HyperParams& p)
{
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"k", p.k}, {"iterations", p.iterations}};
}

HyperParams params_from_json(const json& j)
{
  HyperParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.k = j.at("k").get<int>();
  p.iterations = j.at("iterations").get<int>();
  return p;
}

template <typename T>
json optional_json(const std::optional<T>& v)
{
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key)
{
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json history_json(const HistoryEntry& h)
{
  json j = {{"iteration", h.iteration},
            {"mmd_cost", h.mmd_cost},
            {"embedding_cost", h.embedding_cost},
            {"objective", h.objective},
            {"label_changes", h.label_changes}};
  if (h.accuracy) j["accuracy"] = *h.accuracy;
  return j;
}

HistoryEntry history_from_json(const json& j)
{
  HistoryEntry h;
  h.iteration = j.at("iteration").get<int>();
  h.accuracy = optional_from<double>(j, "accuracy");
  h.mmd_cost = j.at("mmd_cost").get<double>();
  h.embedding_cost = j.at("embedding_cost").get<double>();
  h.objective = j.at("objective").get<double>();
  h.label_changes = j.at("label_changes").get<int>();
  return h;
}

} // namespace

json to_json(const ExperimentConfig& c)
{
  json j;
  if (c.synthetic) {
    const auto& s = *c.synthetic;
    j["synthetic"] = {{"seed", s.seed},   {"n_source", s.n_source}, {"n_target", s.n_target},
                      {"classes", s.classes}, {"dim", s.dim},     {"shift", s.shift},
                      {"rotation", s.rotation}, {"radius", s.radius}};
  }
  json pairs = json::array();
  for (const auto& p : c.pairs) pairs.push_back({{"source", p.source_path}, {"target", p.target_path}});
  j["pairs"] = pairs;
  j["labels"] = optional_json(c.label_column);
  j["target_labels"] = optional_json(c.target_label_column);
  j["preprocess"] = {{"standardize", to_string(c.preprocess.standardize)},
                     {"pca_dims", optional_json(c.preprocess.pca_dims)}};
  j["kernel"] = {{"family", to_string(c.kernel.family)},
                 {"bandwidth", c.kernel.bandwidth ? json(*c.kernel.bandwidth) : json("median")},
                 {"degree", c.kernel.degree},
                 {"offset", c.kernel.offset}};
  j["params"] = c.params ? params_json(*c.params) : json(nullptr);
  if (c.grid) {
    j["grid"] = {{"k", c.grid->k_grid},         {"alpha", c.grid->alpha_grid}, {"beta", c.grid->beta_grid},
                 {"gamma", c.grid->gamma_grid}, {"mode", to_string(c.grid->mode)}, {"iterations", c.grid->iterations}};
  } else {
    j["grid"] = nullptr;
  }
  j["kmm"] = {{"B", c.validation.kmm.B},
              {"epsilon", c.validation.kmm.epsilon ? json(*c.validation.kmm.epsilon) : json("auto")},
              {"val_fraction", c.validation.fraction}};
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  return j;
}

json to_json(const RunReport& r)
{
  json j;
  j["command"] = r.command;
  j["config"] = r.config;
  json results = json::array();
  for (const auto& p : r.results) {
    json pj = {{"source", p.source}, {"target", p.target}};
    if (p.na_accuracy) pj["na_accuracy"] = *p.na_accuracy;
    if (p.net_accuracy) pj["net_accuracy"] = *p.net_accuracy;
    json hist = json::array();
    for (const auto& h : p.history) hist.push_back(history_json(h));
    pj["history"] = hist;
    pj["predictions"] = p.predictions;
    results.push_back(pj);
  }
  j["results"] = results;
  if (r.selection) {
    j["selection"] = {{"best_params", params_json(r.selection->best_params)},
                      {"best_score", r.selection->best_score},
                      {"mode", r.selection->mode},
                      {"scores", r.selection->scores}};
  }
  if (r.kmm) j["kmm"] = *r.kmm;
  j["timings"] = r.timings;
  if (r.error)
    j["error"] = {{"kind", r.error->kind}, {"message", r.error->message}, {"exit_code", r.error->exit_code}};
  return j;
}

RunReport report_from_json(const json& j)
{
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  for (const auto& pj : j.at("results")) {
    PairResult p;
    p.source = pj.at("source").get<std::string>();
    p.target = pj.at("target").get<std::string>();
    p.na_accuracy = optional_from<double>(pj, "na_accuracy");
    p.net_accuracy = optional_from<double>(pj, "net_accuracy");
    for (const auto& hj : pj.at("history")) p.history.push_back(history_from_json(hj));
    p.predictions = pj.at("predictions").get<Labels>();
    r.results.push_back(std::move(p));
  }
  if (j.contains("selection")) {
    const auto& sj = j.at("selection");
    SelectionSummary s;
    s.best_params = params_from_json(sj.at("best_params"));
    s.best_score = sj.at("best_score").get<double>();
    s.mode = sj.at("mode").get<std::string>();
    s.scores = sj.at("scores").get<std::vector<json>>();
    r.selection = std::move(s);
  }
  if (j.contains("kmm")) r.kmm = j.at("kmm");
  r.timings = j.at("timings").get<std::map<std::string, double>>();
  if (j.contains("error")) {
    const auto& ej = j.at("error");
    r.error = ErrorRecord{ej.at("kind").get<std::string>(), ej.at("message").get<std::string>(),
                          ej.at("exit_code").get<int>()};
  }
  return r;
}

void emit_report(const RunReport& report, const std::string& path)
{
  const std::string text = to_json(report).dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report to '" + path + "'");
  out << text;
  if (!out) throw DataError("writing report to '" + path + "' failed");
}

RunReport read_report(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot read report '" + path + "'");
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError("malformed report '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Running

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct LoadedPair
{
  LabeledDomain source;
  LabeledDomain target;
};

std::optional<std::string> target_label_column(const ExperimentConfig& c, const std::string& source_path,
                                               const std::string& target_path)
{
  if (c.target_label_column) {
    if (*c.target_label_column == "none") return std::nullopt;
    return c.target_label_column;
  }
  // Same column as the source when the target file has it.
  const auto header = read_header(target_path);
  if (std::find(header.begin(), header.end(), *c.label_column) != header.end()) return c.label_column;
  const auto source_header = read_header(source_path);
  if (std::find(source_header.begin(), source_header.end(), *c.label_column) == source_header.end() &&
      header.size() == source_header.size())
    return c.label_column; // positional label column, target has the same layout
  return std::nullopt;
}

std::vector<LoadedPair> load_pairs(const ExperimentConfig& c)
{
  std::vector<LoadedPair> out;
  if (c.synthetic) {
    ShiftedGaussianSpec spec = *c.synthetic;
    spec.seed = c.seed;
    auto [s, t] = make_shifted_gaussians(spec);
    out.push_back({std::move(s), std::move(t)});
  } else {
    for (const auto& p : c.pairs) {
      LabeledDomain s = load_dataset(p.source_path, c.label_column);
      LabeledDomain t = load_dataset(p.target_path, target_label_column(c, p.source_path, p.target_path));
      if (s.dim() != t.dim())
        throw DataError("source has " + std::to_string(s.dim()) + " features but target has " +
                        std::to_string(t.dim()));
      out.push_back({std::move(s), std::move(t)});
    }
  }
  for (auto& p : out) {
    const std::string sname = p.source.name, tname = p.target.name;
    std::tie(p.source, p.target) = preprocess(p.source, p.target, c.preprocess);
    p.source.name = sname;
    p.target.name = tname;
  }
  return out;
}

PairResult summarize(const LoadedPair& pair, const BaselineResult& na, const NetModel& model)
{
  PairResult r;
  r.source = pair.source.name;
  r.target = pair.target.name;
  if (na.accuracy) r.na_accuracy = percent(*na.accuracy);
  const auto& last = model.history.back();
  if (last.accuracy) r.net_accuracy = percent(*last.accuracy);
  for (std::size_t i = 0; i < model.history.size(); ++i) {
    const auto& h = model.history[i];
    HistoryEntry e;
    e.iteration = static_cast<int>(i + 1);
    if (h.accuracy) e.accuracy = percent(*h.accuracy);
    e.mmd_cost = h.mmd_cost;
    e.embedding_cost = h.embedding_cost;
    e.objective = h.objective;
    e.label_changes = h.label_changes;
    r.history.push_back(e);
  }
  r.predictions = model.predictions();
  return r;
}

json score_json(const ScoreRow& row)
{
  json j = params_json(row.params);
  if (row.score)
    j["score"] = percent(*row.score);
  else
    j["error"] = row.error;
  return j;
}

template <typename Body>
RunReport guarded(const std::string& command, const ExperimentConfig& config, Body&& body)
{
  RunReport report;
  report.command = command;
  const auto t0 = Clock::now();
  try {
    config.validate();
    report.config = to_json(config);
    body(report);
  } catch (const Error& e) {
    report.error = ErrorRecord{to_string(e.kind()), e.what(), e.exit_code()};
  } catch (const std::exception& e) {
    report.error = ErrorRecord{to_string(ErrorKind::numerical), e.what(), static_cast<int>(ErrorKind::numerical)};
  }
  if (report.config.is_null()) report.config = json::object();
  report.timings["total"] = seconds_since(t0);
  return report;
}

} // namespace

RunReport run(const ExperimentConfig& config)
{
  return guarded(config.grid ? "gridsearch" : "run", config, [&](RunReport& report) {
    auto t = Clock::now();
    const auto pairs = load_pairs(config);
    report.timings["load"] = seconds_since(t);

    std::vector<KernelSpec> kernels;
    for (const auto& p : pairs) kernels.push_back(resolve_bandwidth(config.kernel, stack_rows(p.source.features, p.target.features)));

    HyperParams params;
    if (config.grid) {
      t = Clock::now();
      std::vector<DomainPair> selection_pairs;
      json kmm_summary = json::array();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const KmmResult kmm = kmm_weights(pairs[i].source.features, pairs[i].target.features, kernels[i],
                                          config.validation.kmm);
        const ValidationSplit split = select_validation(pairs[i].source, kmm.weights, config.validation.fraction);
        selection_pairs.push_back(make_selection_pair(pairs[i].source, pairs[i].target, split));
        kmm_summary.push_back({{"objective", kmm.objective},
                               {"iterations", kmm.iterations_used},
                               {"converged", kmm.converged},
                               {"validation_size", split.validation_indices.size()}});
      }
      report.timings["kmm"] = seconds_since(t);
      t = Clock::now();
      // A single kernel spec serves every pair; an unset bandwidth is resolved per pair.
      const KernelSpec spec = pairs.size() == 1 ? kernels.front() : config.kernel;
      const SelectionReport sel = grid_search(selection_pairs, spec, *config.grid, config.jobs);
      report.timings["selection"] = seconds_since(t);

      SelectionSummary s;
      s.best_params = sel.best_params;
      s.best_score = percent(sel.best_score);
      s.mode = to_string(sel.mode);
      for (const auto& row : sel.scores) s.scores.push_back(score_json(row));
      report.selection = std::move(s);
      report.kmm = kmm_summary;
      params = sel.best_params;
    } else {
      params = *config.params;
    }

    t = Clock::now();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const BaselineResult na = na_baseline(pairs[i].source, pairs[i].target);
      const NetModel model = net_fit(pairs[i].source, pairs[i].target, kernels[i], params);
      report.results.push_back(summarize(pairs[i], na, model));
    }
    report.timings["fit"] = seconds_since(t);
  });
}

RunReport run_kmm(const ExperimentConfig& config)
{
  return guarded("kmm", config, [&](RunReport& report) {
    const auto pairs = load_pairs(config);
    const auto& p = pairs.front();
    const KernelSpec spec = resolve_bandwidth(config.kernel, stack_rows(p.source.features, p.target.features));
    const auto t = Clock::now();
    const KmmResult kmm = kmm_weights(p.source.features, p.target.features, spec, config.validation.kmm);
    const ValidationSplit split = select_validation(p.source, kmm.weights, config.validation.fraction);
    report.timings["kmm"] = seconds_since(t);
    std::vector<double> weights(kmm.weights.data(), kmm.weights.data() + kmm.weights.size());
    report.kmm = json{{"weights", weights},
                      {"objective", kmm.objective},
                      {"iterations", kmm.iterations_used},
                      {"converged", kmm.converged},
                      {"feasible", kmm.feasible},
                      {"B", kmm.B},
                      {"epsilon", kmm.epsilon},
                      {"validation_indices", split.validation_indices},
                      {"train_indices", split.train_indices}};
  });
}

} // namespace netda
