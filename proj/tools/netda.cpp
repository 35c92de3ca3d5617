// netda: command-line runner for NET domain adaptation experiments.
//
//   netda run        --source S.csv --target T.csv --labels label [--alpha .. --k ..]
//   netda gridsearch --source S.csv --target T.csv --labels label [--k-grid ..]
//   netda kmm        --source S.csv --target T.csv --labels label
//   netda synth      --out-source S.csv --out-target T.csv [--seed ..]
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.

#include "netda/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace netda;

struct Options
{
  std::vector<std::string> sources, targets;
  std::string labels, target_labels;
  bool synthetic = false;
  ShiftedGaussianSpec synth;
  std::string standardize = "none";
  int pca = 0;
  std::string kernel = "rbf", bandwidth = "median";
  int degree = 2;
  double offset = 1.0;
  HyperParams params;
  std::string k_grid, weight_grid, alpha_grid, beta_grid, gamma_grid, search = "coordinate";
  double kmm_b = 1000.0;
  std::string kmm_eps = "auto";
  double val_fraction = 0.3;
  std::uint64_t seed = 0;
  std::string out = "-";
  int jobs = 1;

  std::vector<CLI::Option*> param_flags, grid_flags;
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag)
{
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError(std::string("bad value '") + item + "' in " + flag);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string(flag) + " must list at least one value");
  return out;
}

double parse_number(const std::string& text, const char* flag)
{
  return parse_list<double>(text, flag).at(0);
}

void add_data_flags(CLI::App* cmd, Options& o, bool multi)
{
  auto* src = cmd->add_option("--source", o.sources, "Source domain file (delimited text with header)");
  auto* tgt = cmd->add_option("--target", o.targets, "Target domain file");
  if (!multi) {
    src->expected(1);
    tgt->expected(1);
  }
  cmd->add_option("--labels", o.labels, "Label column of the source (header name or 0-based index)");
  cmd->add_option("--target-labels", o.target_labels,
                  "Target label column used only for scoring ('none' to ignore; default: same as --labels if present)");
  cmd->add_flag("--synthetic", o.synthetic, "Use a generated shifted-Gaussian pair instead of files");
  cmd->add_option("--synth-ns", o.synth.n_source, "Synthetic source size");
  cmd->add_option("--synth-nt", o.synth.n_target, "Synthetic target size");
  cmd->add_option("--synth-classes", o.synth.classes, "Synthetic class count");
  cmd->add_option("--synth-dim", o.synth.dim, "Synthetic dimension");
  cmd->add_option("--synth-shift", o.synth.shift, "Synthetic target translation");
  cmd->add_option("--synth-rotation", o.synth.rotation, "Synthetic target rotation (radians)");
  cmd->add_option("--standardize", o.standardize, "Feature z-scoring: none, source or pooled")
      ->check(CLI::IsMember({"none", "source", "pooled"}));
  cmd->add_option("--pca", o.pca, "Reduce to this many principal components (pooled fit)");
  cmd->add_option("--kernel", o.kernel, "Kernel family")->check(CLI::IsMember({"linear", "rbf", "poly"}));
  cmd->add_option("--bandwidth", o.bandwidth, "RBF bandwidth or 'median'");
  cmd->add_option("--degree", o.degree, "Polynomial degree");
  cmd->add_option("--offset", o.offset, "Polynomial offset");
  cmd->add_option("--kmm-b", o.kmm_b, "KMM weight upper bound B");
  cmd->add_option("--kmm-eps", o.kmm_eps, "KMM sum slack epsilon or 'auto'");
  cmd->add_option("--val-fraction", o.val_fraction, "Fraction of source used for validation");
  cmd->add_option("--seed", o.seed, "Seed for synthetic data");
  cmd->add_option("--out", o.out, "Report path ('-' for stdout)");
  cmd->add_option("--jobs", o.jobs, "Worker threads for grid search");
}

void add_param_flags(CLI::App* cmd, Options& o)
{
  o.param_flags = {
      cmd->add_option("--alpha", o.params.alpha, "MMD weight"),
      cmd->add_option("--beta", o.params.beta, "Embedding weight"),
      cmd->add_option("--gamma", o.params.gamma, "Regularization weight"),
      cmd->add_option("--k", o.params.k, "Projection dimension"),
  };
  cmd->add_option("--iters", o.params.iterations, "Pseudo-label iterations");
}

void add_grid_flags(CLI::App* cmd, Options& o)
{
  o.grid_flags = {
      cmd->add_option("--k-grid", o.k_grid, "Comma-separated k values"),
      cmd->add_option("--weight-grid", o.weight_grid, "Comma-separated values for alpha, beta and gamma"),
      cmd->add_option("--alpha-grid", o.alpha_grid, "Comma-separated alpha values"),
      cmd->add_option("--beta-grid", o.beta_grid, "Comma-separated beta values"),
      cmd->add_option("--gamma-grid", o.gamma_grid, "Comma-separated gamma values"),
      cmd->add_option("--search", o.search, "full or coordinate"),
  };
}

bool any_given(const std::vector<CLI::Option*>& flags)
{
  return std::any_of(flags.begin(), flags.end(), [](const CLI::Option* f) { return f && f->count() > 0; });
}

ExperimentConfig build_config(const Options& o, bool force_grid)
{
  ExperimentConfig c;
  if (o.sources.size() != o.targets.size()) throw ConfigError("--source and --target must be given in pairs");
  for (std::size_t i = 0; i < o.sources.size(); ++i) c.pairs.push_back({o.sources[i], o.targets[i]});
  if (o.synthetic) c.synthetic = o.synth;
  if (!o.labels.empty()) c.label_column = o.labels;
  if (!o.target_labels.empty()) c.target_label_column = o.target_labels;

  c.preprocess.standardize = o.standardize == "source"   ? StandardizeMode::source
                             : o.standardize == "pooled" ? StandardizeMode::pooled
                                                         : StandardizeMode::none;
  if (o.pca > 0) c.preprocess.pca_dims = o.pca;

  c.kernel.family = parse_kernel_family(o.kernel);
  if (o.bandwidth != "median") c.kernel.bandwidth = parse_number(o.bandwidth, "--bandwidth");
  c.kernel.degree = o.degree;
  c.kernel.offset = o.offset;

  const bool params_given = any_given(o.param_flags);
  const bool grid_given = any_given(o.grid_flags);
  if (params_given) c.params = o.params;
  if (grid_given || force_grid) {
    GridSpec g;
    if (!o.k_grid.empty()) g.k_grid = parse_list<int>(o.k_grid, "--k-grid");
    if (!o.weight_grid.empty()) g.set_weight_grid(parse_list<double>(o.weight_grid, "--weight-grid"));
    if (!o.alpha_grid.empty()) g.alpha_grid = parse_list<double>(o.alpha_grid, "--alpha-grid");
    if (!o.beta_grid.empty()) g.beta_grid = parse_list<double>(o.beta_grid, "--beta-grid");
    if (!o.gamma_grid.empty()) g.gamma_grid = parse_list<double>(o.gamma_grid, "--gamma-grid");
    g.mode = parse_search_mode(o.search);
    g.iterations = o.params.iterations;
    c.grid = g;
  }
  if (!params_given && !c.grid) c.params = o.params; // defaults (1, 1, 1, 20)

  c.validation.kmm.B = o.kmm_b;
  if (o.kmm_eps != "auto") c.validation.kmm.epsilon = parse_number(o.kmm_eps, "--kmm-eps");
  c.validation.fraction = o.val_fraction;
  c.seed = o.seed;
  c.jobs = o.jobs;
  c.output_path = o.out;
  return c;
}

int finish(const RunReport& report, const std::string& out)
{
  try {
    emit_report(report, out);
  } catch (const Error& e) {
    std::cerr << "netda: " << e.what() << "\n";
    return e.exit_code();
  }
  if (report.error) std::cerr << "netda: " << report.error->kind << " error: " << report.error->message << "\n";
  return report.exit_code();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"NET: nonlinear embedding transform for unsupervised domain adaptation"};
  app.require_subcommand(1);

  Options run_opts, grid_opts, kmm_opts;
  auto* run_cmd = app.add_subcommand("run", "NA baseline then NET (fixed parameters) or NET_v (with grid flags)");
  add_data_flags(run_cmd, run_opts, false);
  add_param_flags(run_cmd, run_opts);
  add_grid_flags(run_cmd, run_opts);

  auto* grid_cmd = app.add_subcommand("gridsearch", "NET_v: KMM validation split, grid search, refit");
  add_data_flags(grid_cmd, grid_opts, true);
  grid_cmd->add_option("--iters", grid_opts.params.iterations, "Pseudo-label iterations");
  add_grid_flags(grid_cmd, grid_opts);

  auto* kmm_cmd = app.add_subcommand("kmm", "KMM source weights and the validation split");
  add_data_flags(kmm_cmd, kmm_opts, false);

  ShiftedGaussianSpec synth;
  std::string out_source, out_target;
  bool strip_target = false;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic shifted-Gaussian source/target pair");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--ns", synth.n_source, "Source size");
  synth_cmd->add_option("--nt", synth.n_target, "Target size");
  synth_cmd->add_option("--classes", synth.classes, "Class count");
  synth_cmd->add_option("--dim", synth.dim, "Feature dimension");
  synth_cmd->add_option("--shift", synth.shift, "Target translation");
  synth_cmd->add_option("--rotation", synth.rotation, "Target rotation (radians)");
  synth_cmd->add_option("--radius", synth.radius, "Distance of class means from the origin");
  synth_cmd->add_option("--out-source", out_source, "Source output file")->required();
  synth_cmd->add_option("--out-target", out_target, "Target output file")->required();
  synth_cmd->add_flag("--strip-target-labels", strip_target, "Omit the label column from the target file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (*run_cmd) {
      const auto config = build_config(run_opts, false);
      return finish(run(config), run_opts.out);
    }
    if (*grid_cmd) {
      const auto config = build_config(grid_opts, true);
      return finish(run(config), grid_opts.out);
    }
    if (*kmm_cmd) {
      auto config = build_config(kmm_opts, false);
      return finish(run_kmm(config), kmm_opts.out);
    }
    if (*synth_cmd) {
      const auto [source, target] = make_shifted_gaussians(synth);
      write_dataset(out_source, source, true);
      write_dataset(out_target, target, !strip_target);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "netda: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
