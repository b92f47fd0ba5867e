#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"
#include "runlog.hpp"
#include "sindy.hpp"

namespace asindy {

// Outcome of one closed-loop run.
struct RunResult {
  RunLog log;
  bool crashed = false;
  long crash_step = -1;
  std::string crash_reason;
};

// Simulate one seeded run of the configured trajectory under the configured
// wind, with either controller arm. The wind realization depends only on the
// seed and the step grid, so both arms see identical gust sequences for the
// same seed. `model` may be null (full library is then adapted over);
// `adaptation_enabled` false freezes A at its initial value.
RunResult simulate_run(const ExperimentConfig& cfg, std::uint64_t seed,
                       const std::string& controller, const SindyModel* model,
                       bool adaptation_enabled);

struct CollectResult {
  std::vector<std::string> files;
  std::vector<std::uint64_t> crashed_seeds;
  std::string manifest_path;
};

// Run the configured controller (adaptation forced off for data collection)
// across all seeds, writing one RunLog CSV per run plus a manifest.
CollectResult collect(const ConfigFile& file, const std::string& out_dir);

// Preprocess the given logs, concatenate, solve SR3, and write the model
// file. Prints the identified terms unless the config says quiet.
SindyModel identify(const ConfigFile& file,
                    const std::vector<std::string>& log_paths,
                    const std::string& model_out);

struct ArmResult {
  std::string controller;
  std::vector<std::uint64_t> seeds;          // all seeds, in run order
  std::vector<ErrorStats> per_run;           // surviving runs only
  std::vector<std::uint64_t> crashed_seeds;
  std::optional<AggregateStats> aggregate;   // absent if every run crashed
};

struct EvaluateResult {
  ArmResult asindy;
  ArmResult pid;
  std::vector<std::string> files;
  std::string manifest_path;
};

// Run both controller arms over the same seed list with paired wind, compute
// per-run stats over the post-ramp window, aggregate, and write per-run
// CSVs, results.csv, summary.csv, table.txt, and a manifest.
EvaluateResult evaluate(const ConfigFile& file, const std::string& model_path,
                        const std::string& out_dir);

struct SweepCell {
  std::vector<std::pair<std::string, std::string>> overrides;
  std::optional<EvaluateResult> result;  // absent on cell failure
  std::string error;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::string csv_path;
};

// Cross product of evaluate calls over `grid` entries of the form
// "section.key=v1,v2,...". Cell failures are recorded and the sweep
// continues.
SweepResult sweep(const ConfigFile& file, const std::string& model_path,
                  const std::vector<std::string>& grid,
                  const std::string& out_dir);

}  // namespace asindy
