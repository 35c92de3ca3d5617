#include <doctest.h>

#include "netda/error.hpp"
#include "netda/experiment.hpp"
#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace netda;

namespace {

ExperimentConfig synthetic_config(std::uint64_t seed, int n = 80)
{
  ExperimentConfig c;
  ShiftedGaussianSpec s;
  s.n_source = n;
  s.n_target = n;
  c.synthetic = s;
  c.seed = seed;
  HyperParams p;
  p.k = 10;
  c.params = p;
  return c;
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("percent keeps two decimals")
{
  CHECK(percent(0.7539) == 75.39);
  CHECK(percent(1.0) == 100.0);
  CHECK(percent(2.0 / 3.0) == 66.67);

  testutil::TempDir dir;
  RunReport r;
  r.command = "run";
  r.results.push_back(PairResult{"s", "t", percent(0.70), percent(0.7539), {}, {}});
  emit_report(r, dir.file("r.json"));
  CHECK(slurp(dir.file("r.json")).find("\"net_accuracy\": 75.39") != std::string::npos);
}

TEST_CASE("synthetic run has the expected shape")
{
  const auto report = run(synthetic_config(0));
  CHECK_FALSE(report.error);
  REQUIRE(report.results.size() == 1);
  const auto& pr = report.results[0];
  CHECK(pr.history.size() == 10);
  CHECK(pr.na_accuracy);
  CHECK(pr.net_accuracy);
  CHECK(pr.predictions.size() == 80);
  CHECK(pr.net_accuracy == pr.history.back().accuracy);
}

TEST_CASE("a single iteration gives a single history entry")
{
  auto c = synthetic_config(1);
  c.params->iterations = 1;
  const auto report = run(c);
  REQUIRE(report.results.size() == 1);
  CHECK(report.results[0].history.size() == 1);
}

TEST_CASE("reports round-trip through their serialization")
{
  testutil::TempDir dir;
  auto c = synthetic_config(2);
  c.params.reset();
  GridSpec g;
  g.k_grid = {5, 10};
  g.set_weight_grid({0.1, 1});
  g.iterations = 2;
  c.grid = g;
  const auto report = run(c);
  REQUIRE_FALSE(report.error);
  CHECK(report.selection);
  emit_report(report, dir.file("r.json"));
  const auto back = read_report(dir.file("r.json"));
  CHECK(back == report);
  CHECK(to_json(back).dump() == to_json(report).dump());
}

TEST_CASE("identical configurations give identical reports")
{
  auto a = run(synthetic_config(3));
  auto b = run(synthetic_config(3));
  a.timings.clear();
  b.timings.clear();
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("configurations with both params and grid are rejected before any work")
{
  auto c = synthetic_config(4);
  c.grid = GridSpec{};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  const auto report = run(c);
  REQUIRE(report.error);
  CHECK(report.exit_code() == 1);
  CHECK(report.results.empty());

  auto none = synthetic_config(4);
  none.params.reset();
  CHECK_THROWS_AS(none.validate(), ConfigError);
}

TEST_CASE("errors are captured with their exit codes")
{
  ExperimentConfig missing;
  missing.pairs.push_back({"/nonexistent/source.csv", "/nonexistent/target.csv"});
  missing.label_column = "label";
  missing.params = HyperParams{};
  const auto report = run(missing);
  REQUIRE(report.error);
  CHECK(report.error->kind == "data");
  CHECK(report.exit_code() == 2);
}

TEST_CASE("stripping target labels only removes accuracy fields")
{
  testutil::TempDir dir;
  ShiftedGaussianSpec s;
  s.n_source = 60;
  s.n_target = 50;
  const auto [src, tgt] = make_shifted_gaussians(s);
  write_dataset(dir.file("s.csv"), src);
  write_dataset(dir.file("t.csv"), tgt);

  ExperimentConfig c;
  c.pairs.push_back({dir.file("s.csv"), dir.file("t.csv")});
  c.label_column = "label";
  HyperParams p;
  p.k = 8;
  c.params = p;
  auto labelled = to_json(run(c));
  write_dataset(dir.file("t.csv"), tgt, false);
  auto stripped = to_json(run(c));

  REQUIRE_FALSE(labelled.contains("error"));
  REQUIRE_FALSE(stripped.contains("error"));
  auto& lr = labelled["results"][0];
  CHECK(lr.contains("na_accuracy"));
  CHECK_FALSE(stripped["results"][0].contains("na_accuracy"));
  CHECK_FALSE(stripped["results"][0].contains("net_accuracy"));
  lr.erase("na_accuracy");
  lr.erase("net_accuracy");
  for (auto& h : lr["history"]) h.erase("accuracy");
  labelled.erase("timings");
  stripped.erase("timings");
  CHECK(labelled.dump() == stripped.dump());
}

TEST_CASE("kmm command reports weights and the split")
{
  auto c = synthetic_config(5, 40);
  const auto report = run_kmm(c);
  REQUIRE(report.kmm);
  CHECK((*report.kmm)["weights"].size() == 40);
  CHECK((*report.kmm)["validation_indices"].size() == 12);
}
