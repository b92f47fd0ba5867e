#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "adaptive.hpp"
#include "digest.hpp"
#include "errors.hpp"
#include "pid.hpp"
#include "rigid_body.hpp"
#include "wind.hpp"

namespace fs = std::filesystem;

namespace asindy {

namespace {

// Crash gates: qualitative divergence turned into a quantitative rule.
constexpr double kCrashPosition = 50.0;  // [m]
constexpr double kCrashVelocity = 20.0;  // [m/s]

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("harness: cannot digest '" + path + "'");
  Fnv1a h;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.value();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_manifest(const std::string& path, const std::string& command,
                    const ExperimentConfig& cfg,
                    const std::vector<std::string>& files,
                    const std::vector<std::uint64_t>& crashed_seeds) {
  nlohmann::json m;
  m["command"] = command;
  m["config_digest"] = hex64(cfg.digest);
  m["seeds"] = cfg.seeds;
  m["crashed_seeds"] = crashed_seeds;
  auto& list = m["files"] = nlohmann::json::array();
  for (const std::string& f : files) {
    list.push_back({{"path", fs::path(f).filename().string()},
                    {"fnv1a64", hex64(file_digest(f))}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("harness: cannot write manifest '" + path + "'");
  out << m.dump(2) << '\n';
}

AdaptationState make_adaptation(const ExperimentConfig& cfg,
                                const ActiveFeatures& features,
                                const SindyModel* model) {
  AdaptationState adapt = AdaptationState::init(
      static_cast<int>(features.size()), cfg.adaptive.p0,
      cfg.adaptive.lambda_leak, cfg.adaptive.q, cfg.adaptive.r,
      cfg.adaptive.r_bar, cfg.adaptive.p_floor);
  if (cfg.adaptive.init_from_model && model != nullptr) {
    for (std::size_t i = 0; i < features.active.size(); ++i) {
      adapt.A.row(static_cast<Eigen::Index>(i)) =
          model->xi.row(features.active[i]);
    }
  }
  return adapt;
}

}  // namespace

RunResult simulate_run(const ExperimentConfig& cfg, std::uint64_t seed,
                       const std::string& controller, const SindyModel* model,
                       bool adaptation_enabled) {
  if (controller != "asindy" && controller != "pid") {
    throw ConfigError("simulate_run: unknown controller '" + controller + "'");
  }

  OUParams ou = cfg.ou;
  ou.seed = seed;
  WindProcess wind(ou, cfg.wind);

  VehicleState state;
  state.p = sample(cfg.trajectory, 0.0).p_d;

  ActiveFeatures features =
      model != nullptr ? ActiveFeatures::from_model(*model)
                       : ActiveFeatures::full(LibrarySpec::default_library());
  AdaptationState adapt = make_adaptation(cfg, features, model);
  ControllerMemory memory = ControllerMemory::initial(cfg.vehicle);
  AsindyOptions opts = cfg.adaptive.options();
  opts.adaptation_enabled = adaptation_enabled;
  PidState integ;

  RunResult result;
  const long n_steps = std::lround(cfg.trajectory.duration / cfg.dt);
  const double log_period = 1.0 / cfg.log_rate;
  double next_log_t = 0.0;

  for (long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state.t = t;
    const ReferenceSample ref = sample(cfg.trajectory, t);

    ControlCommand cmd;
    ControlDebug debug;
    try {
      if (controller == "asindy") {
        AsindyStep step_out =
            control_step(state, ref, cfg.adaptive.gains, adapt, memory,
                         features, cfg.vehicle, opts, cfg.dt);
        cmd = step_out.cmd;
        debug = step_out.debug;
        adapt = std::move(step_out.adapt);
        memory = step_out.memory;
      } else {
        PidStep step_out = pid_step(state, ref, cfg.pid, integ, cfg.vehicle,
                                    cfg.dt, cfg.adaptive.options().tilt_max);
        cmd = step_out.cmd;
        debug = step_out.debug;
        integ = step_out.state;
      }
    } catch (const AdaptationDivergenceError& e) {
      result.crashed = true;
      result.crash_step = k;
      result.crash_reason = e.what();
      break;
    }

    const Vec3 f_wind = wind.advance(cfg.dt);

    if (t >= next_log_t - 1e-12) {
      RunLogRow row;
      row.t = t;
      row.p_d = ref.p_d; row.v_d = ref.v_d; row.a_d = ref.a_d;
      row.p = state.p; row.v = state.v;
      row.eta = state.eta; row.omega = state.omega;
      row.thrust = cmd.thrust;
      row.att_des = cmd.att_des;
      row.f_wind = f_wind;
      row.a_wind = wind_accel(f_wind, cfg.vehicle.m);
      row.f_dist = debug.f_dist;
      row.f_hat = debug.f_hat;
      row.s = debug.s;
      row.e_p = debug.e_p;
      row.e_v = debug.e_v;
      row.event = debug.fallback ? kEventFallback : kEventNone;
      result.log.rows.push_back(row);
      next_log_t += log_period;
    }

    try {
      state = step(state, cmd, f_wind, cfg.vehicle, cfg.dt);
    } catch (const SimDivergenceError& e) {
      result.crashed = true;
      result.crash_step = k;
      result.crash_reason = e.what();
      break;
    }
    if (state.p.norm() > kCrashPosition || state.v.norm() > kCrashVelocity) {
      result.crashed = true;
      result.crash_step = k;
      result.crash_reason = "crash gate: position or velocity bound exceeded";
      break;
    }
  }

  if (result.crashed && !result.log.rows.empty()) {
    result.log.rows.back().event = kEventCrash;
  }
  return result;
}

CollectResult collect(const ConfigFile& file, const std::string& out_dir) {
  const ExperimentConfig cfg = ExperimentConfig::from_config(file);
  fs::create_directories(out_dir);

  // Data collection always uses the stock (non-adaptive) loop.
  SindyModel model;
  const SindyModel* model_ptr = nullptr;
  if (!cfg.model_path.empty()) {
    model = load_model(cfg.model_path);
    model_ptr = &model;
  }

  CollectResult out;
  for (std::uint64_t seed : cfg.seeds) {
    RunResult run = simulate_run(cfg, seed, cfg.controller, model_ptr, false);
    const std::string path =
        (fs::path(out_dir) / ("run_s" + std::to_string(seed) + ".csv")).string();
    save_runlog(run.log, path);
    out.files.push_back(path);
    if (run.crashed) out.crashed_seeds.push_back(seed);
    if (!cfg.quiet) {
      std::cout << "collect: seed " << seed << " -> " << path << " ("
                << run.log.rows.size() << " rows"
                << (run.crashed ? ", crashed" : "") << ")\n";
    }
  }

  out.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  write_manifest(out.manifest_path, "collect", cfg, out.files,
                 out.crashed_seeds);
  return out;
}

SindyModel identify(const ConfigFile& file,
                    const std::vector<std::string>& log_paths,
                    const std::string& model_out) {
  const ExperimentConfig cfg = ExperimentConfig::from_config(file);
  if (log_paths.empty()) throw DataError("identify: no logs given");

  const LibrarySpec library = LibrarySpec::default_library();
  std::vector<TrainingSet> sets;
  for (const std::string& path : log_paths) {
    try {
      sets.push_back(
          build_target(load_runlog(path), cfg.vehicle, library, cfg.build));
    } catch (const Error& e) {
      throw DataError("identify: " + path + ": " + e.what());
    }
  }

  SindyModel model = solve_sr3(concat(sets), cfg.sr3);
  save_model(model, model_out);

  if (!cfg.quiet) {
    std::cout << "identified residual-force model (" << model.meta.solver
              << ", " << log_paths.size() << " logs):\n";
    const char* axes[3] = {"x", "y", "z"};
    for (int axis = 0; axis < 3; ++axis) {
      std::cout << "  f_" << axes[axis] << " =";
      bool any = false;
      for (Eigen::Index i = 0; i < model.xi.rows(); ++i) {
        if (model.xi(i, axis) == 0.0) continue;
        std::cout << (any ? " + " : " ") << model.xi(i, axis) << " * "
                  << term_name(model.library.terms[i]);
        any = true;
      }
      if (!any) std::cout << " 0";
      std::cout << '\n';
    }
    std::cout << "model written to " << model_out << '\n';
  }
  return model;
}

namespace {

ArmResult run_arm(const ExperimentConfig& cfg, const std::string& controller,
                  const SindyModel* model, const std::string& out_dir,
                  std::vector<std::string>& files) {
  ArmResult arm;
  arm.controller = controller;
  for (std::uint64_t seed : cfg.seeds) {
    arm.seeds.push_back(seed);
    const bool adapt_on = controller == "asindy" && cfg.adaptive.enabled;
    RunResult run = simulate_run(cfg, seed, controller,
                                 controller == "asindy" ? model : nullptr,
                                 adapt_on);
    const std::string path =
        (fs::path(out_dir) /
         (controller + "_s" + std::to_string(seed) + ".csv"))
            .string();
    save_runlog(run.log, path);
    files.push_back(path);
    if (run.crashed) {
      arm.crashed_seeds.push_back(seed);
    } else {
      arm.per_run.push_back(compute_stats(
          planar_error_series(run.log, cfg.trajectory.ramp_time)));
    }
    if (!cfg.quiet) {
      std::cout << "evaluate: " << controller << " seed " << seed
                << (run.crashed ? " crashed at step " +
                                      std::to_string(run.crash_step)
                                : "")
                << '\n';
    }
  }
  if (!arm.per_run.empty()) arm.aggregate = aggregate(arm.per_run);
  return arm;
}

std::string format_mean_std(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f +/- %.3f", mean, sd);
  return buf;
}

void write_results_csv(const std::string& path, const ExperimentConfig& cfg,
                       const std::vector<const ArmResult*>& arms) {
  std::ofstream out(path);
  if (!out) throw IoError("harness: cannot write '" + path + "'");
  out << "trajectory,controller,seed,rmse_xy,mae_xy,p95_xy,max_xy,crashed\n";
  for (const ArmResult* arm : arms) {
    std::size_t alive = 0;
    for (std::size_t i = 0; i < arm->seeds.size(); ++i) {
      const std::uint64_t seed = arm->seeds[i];
      const bool crashed =
          std::find(arm->crashed_seeds.begin(), arm->crashed_seeds.end(),
                    seed) != arm->crashed_seeds.end();
      out << to_string(cfg.trajectory.kind) << ',' << arm->controller << ','
          << seed << ',';
      if (crashed) {
        out << ",,,,1\n";
      } else {
        const ErrorStats& st = arm->per_run[alive++];
        out << fmt17(st.rmse_xy) << ',' << fmt17(st.mae_xy) << ','
            << fmt17(st.p95_xy) << ',' << fmt17(st.max_xy) << ",0\n";
      }
    }
  }
}

void write_summary_csv(const std::string& path, const ExperimentConfig& cfg,
                       const std::vector<const ArmResult*>& arms) {
  std::ofstream out(path);
  if (!out) throw IoError("harness: cannot write '" + path + "'");
  out << "trajectory,controller,runs,crashes,rmse_xy_mean,rmse_xy_std,"
         "mae_xy_mean,mae_xy_std,p95_xy_mean,p95_xy_std,max_xy_mean,"
         "max_xy_std\n";
  for (const ArmResult* arm : arms) {
    out << to_string(cfg.trajectory.kind) << ',' << arm->controller << ','
        << arm->seeds.size() << ',' << arm->crashed_seeds.size() << ',';
    if (arm->aggregate) {
      const AggregateStats& a = *arm->aggregate;
      out << fmt17(a.mean.rmse_xy) << ',' << fmt17(a.std.rmse_xy) << ','
          << fmt17(a.mean.mae_xy) << ',' << fmt17(a.std.mae_xy) << ','
          << fmt17(a.mean.p95_xy) << ',' << fmt17(a.std.p95_xy) << ','
          << fmt17(a.mean.max_xy) << ',' << fmt17(a.std.max_xy) << '\n';
    } else {
      out << ",,,,,,,\n";
    }
  }
}

void write_table_txt(const std::string& path, const ExperimentConfig& cfg,
                     const std::vector<const ArmResult*>& arms) {
  std::ofstream out(path);
  if (!out) throw IoError("harness: cannot write '" + path + "'");
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-8s %-18s %-18s %-18s %-18s %s\n",
                "Trajectory", "Control", "RMSE_xy [m]", "MAE_xy [m]",
                "P95_xy [m]", "Max_xy [m]", "Crashes");
  out << line;
  for (const ArmResult* arm : arms) {
    std::string rmse = "-", mae = "-", p95 = "-", mx = "-";
    if (arm->aggregate) {
      const AggregateStats& a = *arm->aggregate;
      rmse = format_mean_std(a.mean.rmse_xy, a.std.rmse_xy);
      mae = format_mean_std(a.mean.mae_xy, a.std.mae_xy);
      p95 = format_mean_std(a.mean.p95_xy, a.std.p95_xy);
      mx = format_mean_std(a.mean.max_xy, a.std.max_xy);
    }
    std::snprintf(line, sizeof(line),
                  "%-12s %-8s %-18s %-18s %-18s %-18s %zu/%zu\n",
                  to_string(cfg.trajectory.kind).c_str(),
                  arm->controller.c_str(), rmse.c_str(), mae.c_str(),
                  p95.c_str(), mx.c_str(), arm->crashed_seeds.size(),
                  arm->seeds.size());
    out << line;
  }
}

}  // namespace

EvaluateResult evaluate(const ConfigFile& file, const std::string& model_path,
                        const std::string& out_dir) {
  ExperimentConfig cfg = ExperimentConfig::from_config(file);
  const std::string resolved_model =
      !model_path.empty() ? model_path : cfg.model_path;
  if (resolved_model.empty()) {
    throw ConfigError("evaluate: no model given (run.model or --model)");
  }
  const SindyModel model = load_model(resolved_model);
  fs::create_directories(out_dir);

  EvaluateResult out;
  out.asindy = run_arm(cfg, "asindy", &model, out_dir, out.files);
  out.pid = run_arm(cfg, "pid", nullptr, out_dir, out.files);

  const std::vector<const ArmResult*> arms = {&out.asindy, &out.pid};
  const std::string results_csv = (fs::path(out_dir) / "results.csv").string();
  const std::string summary_csv = (fs::path(out_dir) / "summary.csv").string();
  const std::string table_txt = (fs::path(out_dir) / "table.txt").string();
  write_results_csv(results_csv, cfg, arms);
  write_summary_csv(summary_csv, cfg, arms);
  write_table_txt(table_txt, cfg, arms);
  out.files.push_back(results_csv);
  out.files.push_back(summary_csv);
  out.files.push_back(table_txt);

  if (!cfg.quiet) {
    std::ifstream table(table_txt);
    std::cout << table.rdbuf();
  }

  out.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  std::vector<std::uint64_t> crashed = out.asindy.crashed_seeds;
  crashed.insert(crashed.end(), out.pid.crashed_seeds.begin(),
                 out.pid.crashed_seeds.end());
  write_manifest(out.manifest_path, "evaluate", cfg, out.files, crashed);
  return out;
}

SweepResult sweep(const ConfigFile& file, const std::string& model_path,
                  const std::vector<std::string>& grid,
                  const std::string& out_dir) {
  if (grid.empty()) throw ConfigError("sweep: empty parameter grid");

  // Parse "section.key=v1,v2,..." axes.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const std::string& spec : grid) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("sweep: grid entry must be section.key=v1,v2 ('" +
                        spec + "')");
    }
    const std::string key = spec.substr(0, eq);
    std::vector<std::string> values;
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      values.push_back(rest.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (values.empty()) throw ConfigError("sweep: no values for '" + key + "'");
    axes.emplace_back(key, values);
  }

  fs::create_directories(out_dir);
  SweepResult out;
  out.csv_path = (fs::path(out_dir) / "sweep.csv").string();
  std::ofstream csv(out.csv_path);
  if (!csv) throw IoError("sweep: cannot write '" + out.csv_path + "'");
  csv << "cell,overrides,controller,runs,crashes,rmse_xy_mean,p95_xy_mean,"
         "error\n";

  std::vector<std::size_t> index(axes.size(), 0);
  std::size_t cell_id = 0;
  while (true) {
    SweepCell cell;
    ConfigFile cell_file = file;
    std::string override_desc;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& [key, values] = axes[a];
      cell_file.set(key, values[index[a]]);
      cell.overrides.emplace_back(key, values[index[a]]);
      if (!override_desc.empty()) override_desc += ';';
      override_desc += key + "=" + values[index[a]];
    }

    const std::string cell_dir =
        (fs::path(out_dir) / ("cell_" + std::to_string(cell_id))).string();
    try {
      cell.result = evaluate(cell_file, model_path, cell_dir);
      for (const ArmResult* arm :
           {&cell.result->asindy, &cell.result->pid}) {
        csv << cell_id << ",\"" << override_desc << "\"," << arm->controller
            << ',' << arm->seeds.size() << ',' << arm->crashed_seeds.size()
            << ',';
        if (arm->aggregate) {
          csv << fmt17(arm->aggregate->mean.rmse_xy) << ','
              << fmt17(arm->aggregate->mean.p95_xy);
        } else {
          csv << ',';
        }
        csv << ",\n";
      }
    } catch (const Error& e) {
      cell.error = e.what();
      csv << cell_id << ",\"" << override_desc << "\",,,,,,\"" << e.what()
          << "\"\n";
    }
    out.cells.push_back(std::move(cell));
    ++cell_id;

    // Advance the mixed-radix counter.
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++index[a] < axes[a].second.size()) break;
      index[a] = 0;
    }
    if (a == axes.size()) break;
  }
  return out;
}

}  // namespace asindy
