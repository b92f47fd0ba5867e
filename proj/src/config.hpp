#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adaptive.hpp"
#include "pid.hpp"
#include "sindy.hpp"
#include "trajectory.hpp"
#include "types.hpp"
#include "wind.hpp"

namespace asindy {

// Flat key-value text with [section] headers, '#' comments, and
// space-separated vector values. Unknown keys are rejected when the typed
// experiment configuration is built, and the canonical serialization (sorted
// by section and key) feeds the config digest.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& def) const;
  double get_double(const std::string& section, const std::string& key,
                    double def) const;
  int get_int(const std::string& section, const std::string& key, int def) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool def) const;
  Vec3 get_vec3(const std::string& section, const std::string& key,
                const Vec3& def) const;
  std::vector<double> get_list(const std::string& section,
                               const std::string& key) const;

  // key in "section.key" form; inserts or replaces.
  void set(const std::string& dotted_key, const std::string& value);

  std::string canonical_text() const;
  std::uint64_t digest() const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct AdaptiveConfig {
  ControllerGains gains;
  double p0 = 1.0;
  double lambda_leak = 0.3;
  double q = 0.01;
  double r = 0.5;
  double r_bar = 0.5;
  double p_floor = 1e-6;
  double lpf_cutoff_hz = 15.0;
  double tilt_max_deg = 35.0;
  bool enabled = true;
  bool init_from_model = false;

  AsindyOptions options() const {
    return {tilt_max_deg * M_PI / 180.0, lpf_cutoff_hz, enabled};
  }
};

// Fully resolved experiment description.
struct ExperimentConfig {
  VehicleParams vehicle;
  OUParams ou;
  WindCompositionParams wind;
  TrajectorySpec trajectory;
  std::string controller = "asindy";  // "asindy" or "pid"
  PidGains pid;
  AdaptiveConfig adaptive;
  SR3Settings sr3;
  BuildTargetSettings build;
  std::string model_path;  // optional
  int runs = 10;
  std::vector<std::uint64_t> seeds;  // resolved, length == runs
  double dt = 0.004;
  double log_rate = 40.0;
  bool quiet = false;

  std::uint64_t digest = 0;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_config(const ConfigFile& file);
};

}  // namespace asindy
