#pragma once

#include "netda/data.hpp"
#include "netda/kernel.hpp"
#include "netda/kmm.hpp"
#include "netda/net.hpp"

#include <optional>
#include <string>
#include <vector>

namespace netda {

enum class SearchMode { full, coordinate };

const char* to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& name);

struct GridSpec
{
  std::vector<int> k_grid = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 200};
  std::vector<double> alpha_grid = default_weight_grid();
  std::vector<double> beta_grid = default_weight_grid();
  std::vector<double> gamma_grid = default_weight_grid();
  SearchMode mode = SearchMode::coordinate;
  int iterations = 10;

  static std::vector<double> default_weight_grid()
  {
    return {0, 0.0001, 0.0005, 0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1, 5, 10};
  }

  /// Same weight set for alpha, beta and gamma.
  void set_weight_grid(const std::vector<double>& weights);
  void validate() const;
};

struct ScoreRow
{
  HyperParams params;
  std::optional<double> score; // validation accuracy; empty when the fit failed
  std::string error;
};

struct SelectionReport
{
  HyperParams best_params;
  double best_score = 0.0;
  std::vector<ScoreRow> scores; // sorted by (k, alpha, beta, gamma)
  SearchMode mode = SearchMode::coordinate;
};

/// Value-based ordering used for tie-breaking: smaller k, then smaller
/// (alpha, beta, gamma) lexicographically.
bool params_less(const HyperParams& a, const HyperParams& b);

struct DomainPair
{
  LabeledDomain train_source;      // labelled
  LabeledDomain validation_source; // labels used only for scoring
  LabeledDomain target;            // labels never read
};

/// Scores every configuration by fitting on train_source against the
/// unlabelled stack [validation_source; target] and measuring accuracy on the
/// validation rows. With several pairs the score is the mean over pairs.
/// Configurations run on up to `jobs` threads; failed fits are recorded and
/// skipped.
SelectionReport grid_search(const std::vector<DomainPair>& pairs, const KernelSpec& spec, const GridSpec& grid,
                            int jobs = 1);

SelectionReport grid_search(const LabeledDomain& train_source, const LabeledDomain& validation_source,
                            const LabeledDomain& target, const KernelSpec& spec, const GridSpec& grid, int jobs = 1);

struct ValidationConfig
{
  KmmConfig kmm;
  double fraction = 0.3;
};

struct PipelineResult
{
  KmmResult kmm;
  ValidationSplit split;
  SelectionReport selection;
  NetModel model;
};

/// KMM weights -> validation split -> grid search -> refit on the full source
/// against the real target with the selected parameters.
PipelineResult validate_pipeline(const LabeledDomain& source, const LabeledDomain& target, const KernelSpec& spec,
                                 const GridSpec& grid, const ValidationConfig& config = {}, int jobs = 1);

/// Builds the selection pair (train split, validation split, target) for one domain pair.
DomainPair make_selection_pair(const LabeledDomain& source, const LabeledDomain& target, const ValidationSplit& split);

} // namespace netda
