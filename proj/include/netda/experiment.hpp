#pragma once

#include "netda/data.hpp"
#include "netda/error.hpp"
#include "netda/kernel.hpp"
#include "netda/kmm.hpp"
#include "netda/modelsel.hpp"
#include "netda/net.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netda {

struct DataPairConfig
{
  std::string source_path;
  std::string target_path;
};

struct ExperimentConfig
{
  std::vector<DataPairConfig> pairs;          // file inputs; empty when synthetic
  std::optional<ShiftedGaussianSpec> synthetic;
  std::optional<std::string> label_column;    // source label column (name or 0-based index)
  std::optional<std::string> target_label_column; // defaults to label_column when the target has it
  PreprocessSpec preprocess;
  KernelSpec kernel;
  std::optional<HyperParams> params;
  std::optional<GridSpec> grid;
  ValidationConfig validation;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<std::string> output_path;

  /// Throws ConfigError; called before any data is touched.
  void validate() const;
};

struct HistoryEntry
{
  int iteration = 0;
  std::optional<double> accuracy; // percent, 2 decimals
  double mmd_cost = 0.0;
  double embedding_cost = 0.0;
  double objective = 0.0;
  int label_changes = 0;

  bool operator==(const HistoryEntry&) const = default;
};

struct PairResult
{
  std::string source;
  std::string target;
  std::optional<double> na_accuracy;  // percent
  std::optional<double> net_accuracy; // percent
  std::vector<HistoryEntry> history;
  Labels predictions;

  bool operator==(const PairResult&) const = default;
};

struct SelectionSummary
{
  HyperParams best_params;
  double best_score = 0.0; // validation accuracy, percent
  std::string mode;
  std::vector<nlohmann::json> scores;

  bool operator==(const SelectionSummary&) const = default;
};

struct ErrorRecord
{
  std::string kind;
  std::string message;
  int exit_code = 0;

  bool operator==(const ErrorRecord&) const = default;
};

struct RunReport
{
  std::string command;
  nlohmann::json config;
  std::vector<PairResult> results;
  std::optional<SelectionSummary> selection;
  std::optional<nlohmann::json> kmm; // weights-only runs
  std::map<std::string, double> timings;
  std::optional<ErrorRecord> error;

  int exit_code() const { return error ? error->exit_code : 0; }
  bool operator==(const RunReport&) const = default;
};

/// Accuracy fraction as a percentage rounded to two decimals (0.7539 -> 75.39).
double percent(double fraction);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Executes NA, then NET with fixed parameters or NET_v when a grid is set.
/// Errors are captured in the report rather than thrown.
RunReport run(const ExperimentConfig& config);

/// KMM weights and the induced validation split for the first data pair.
RunReport run_kmm(const ExperimentConfig& config);

/// Pretty-printed JSON; "-" writes to stdout.
void emit_report(const RunReport& report, const std::string& path);
RunReport read_report(const std::string& path);

} // namespace netda
