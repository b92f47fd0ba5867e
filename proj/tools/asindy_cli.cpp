// asindy command line: collect / identify / evaluate / sweep, all driven
// through the shared-library C API.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asindy.h"

namespace {

struct ConfigDeleter {
  void operator()(asindy_config* c) const { asindy_config_free(c); }
};
using ConfigHandle = std::unique_ptr<asindy_config, ConfigDeleter>;

int report(asindy_status status, const char* what) {
  if (status == ASINDY_OK) return 0;
  std::fprintf(stderr, "asindy: %s failed (status %d): %s\n", what,
               static_cast<int>(status), asindy_last_error());
  return static_cast<int>(status);
}

// Shared flags mapped onto config overrides.
struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string seeds;
  int runs = -1;
  std::string controller;
  std::string model;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_out = true) {
  cmd->add_option("--config", opts.config_path, "experiment configuration file")
      ->required();
  if (with_out) {
    cmd->add_option("--out", opts.out_dir, "output directory");
  }
  cmd->add_option("--seeds", opts.seeds,
                  "explicit seed list, space or comma separated");
  cmd->add_option("--runs", opts.runs, "number of runs");
  cmd->add_option("--controller", opts.controller, "asindy or pid");
  cmd->add_option("--model", opts.model, "sindy model file");
  cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

int load_config(const CommonOpts& opts, ConfigHandle& out) {
  asindy_config* raw = nullptr;
  if (int rc = report(asindy_config_load(opts.config_path.c_str(), &raw),
                      "config load")) {
    return rc;
  }
  out.reset(raw);

  auto set = [&](const char* key, const std::string& value) {
    return report(asindy_config_set(out.get(), key, value.c_str()),
                  "config override");
  };
  if (opts.runs >= 0) {
    if (int rc = set("run.runs", std::to_string(opts.runs))) return rc;
  }
  if (!opts.seeds.empty()) {
    std::string spaced = opts.seeds;
    for (char& c : spaced) {
      if (c == ',') c = ' ';
    }
    if (int rc = set("run.seeds", spaced)) return rc;
  }
  if (!opts.controller.empty()) {
    if (int rc = set("run.controller", opts.controller)) return rc;
  }
  if (opts.quiet) {
    if (int rc = set("run.quiet", "true")) return rc;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadrotor disturbance-rejection workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(asindy_version()));

  CommonOpts collect_opts, identify_opts, evaluate_opts, sweep_opts;
  std::vector<std::string> identify_logs;
  std::string identify_out = "model.txt";
  std::vector<std::string> sweep_grid;

  CLI::App* collect = app.add_subcommand(
      "collect", "run the seeded data-collection campaign");
  add_common(collect, collect_opts);

  CLI::App* identify =
      app.add_subcommand("identify", "fit the residual-force model from logs");
  add_common(identify, identify_opts, false);
  identify->add_option("logs", identify_logs, "RunLog CSV files")->required();
  identify->add_option("--out-model", identify_out, "output model path");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "compare asindy and pid over paired wind seeds");
  add_common(evaluate, evaluate_opts);

  CLI::App* sweep =
      app.add_subcommand("sweep", "grid of evaluate calls over overrides");
  add_common(sweep, sweep_opts);
  sweep->add_option("--set", sweep_grid,
                    "grid axis section.key=v1,v2 (repeatable)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  ConfigHandle cfg;
  if (collect->parsed()) {
    if (int rc = load_config(collect_opts, cfg)) return rc;
    return report(asindy_collect(cfg.get(), collect_opts.out_dir.c_str()),
                  "collect");
  }
  if (identify->parsed()) {
    if (int rc = load_config(identify_opts, cfg)) return rc;
    std::vector<const char*> paths;
    paths.reserve(identify_logs.size());
    for (const std::string& p : identify_logs) paths.push_back(p.c_str());
    if (!identify_opts.model.empty()) identify_out = identify_opts.model;
    return report(asindy_identify(cfg.get(), paths.data(), paths.size(),
                                  identify_out.c_str()),
                  "identify");
  }
  if (evaluate->parsed()) {
    if (int rc = load_config(evaluate_opts, cfg)) return rc;
    return report(asindy_evaluate(cfg.get(), evaluate_opts.model.c_str(),
                                  evaluate_opts.out_dir.c_str()),
                  "evaluate");
  }
  if (sweep->parsed()) {
    if (int rc = load_config(sweep_opts, cfg)) return rc;
    std::vector<const char*> grid;
    grid.reserve(sweep_grid.size());
    for (const std::string& g : sweep_grid) grid.push_back(g.c_str());
    return report(asindy_sweep(cfg.get(), sweep_opts.model.c_str(), grid.data(),
                               grid.size(), sweep_opts.out_dir.c_str()),
                  "sweep");
  }
  return 0;
}
