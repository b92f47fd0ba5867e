#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "digest.hpp"
#include "errors.hpp"

namespace asindy {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || trim(end).size() > 0) {
    throw ConfigError("config: " + section + "." + key +
                      " is not a number: '" + value + "'");
  }
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: malformed section at line " +
                          std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ConfigError("config: malformed entry at line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: empty key at line " + std::to_string(lineno));
    }
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& def) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return def;
  const auto k = s->second.find(key);
  return k == s->second.end() ? def : k->second;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double def) const {
  if (!has(section, key)) return def;
  return parse_double(section, key, get_string(section, key, ""));
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int def) const {
  const double v = get_double(section, key, static_cast<double>(def));
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("config: " + section + "." + key + " must be an integer");
  }
  return i;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool def) const {
  if (!has(section, key)) return def;
  const std::string v = get_string(section, key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: " + section + "." + key + " is not a boolean: '" +
                    v + "'");
}

std::vector<double> ConfigFile::get_list(const std::string& section,
                                         const std::string& key) const {
  std::vector<double> out;
  std::istringstream ss(get_string(section, key, ""));
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(section, key, tok));
  return out;
}

Vec3 ConfigFile::get_vec3(const std::string& section, const std::string& key,
                          const Vec3& def) const {
  if (!has(section, key)) return def;
  const auto vals = get_list(section, key);
  if (vals.size() != 3) {
    throw ConfigError("config: " + section + "." + key +
                      " must have 3 components");
  }
  return {vals[0], vals[1], vals[2]};
}

void ConfigFile::set(const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ConfigError("config: override key must be section.key, got '" +
                      dotted_key + "'");
  }
  sections_[dotted_key.substr(0, dot)][dotted_key.substr(dot + 1)] =
      trim(value);
}

std::string ConfigFile::canonical_text() const {
  std::string out;
  for (const auto& [section, entries] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : entries) {
      out += key + " = " + value + "\n";
    }
  }
  return out;
}

std::uint64_t ConfigFile::digest() const {
  Fnv1a h;
  h.update(canonical_text());
  return h.value();
}

namespace {

// Every recognized key; anything else in a config is a typo and rejected.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "vehicle.mass", "vehicle.gravity", "vehicle.tau_att",
      "vehicle.thrust_min", "vehicle.thrust_max",
      "wind.ou_mu", "wind.ou_theta", "wind.ou_sigma",
      "wind.f_mean", "wind.f_amp", "wind.freq", "wind.phi0",
      "wind.t_on", "wind.t_off", "wind.f_cap", "wind.rate_cap",
      "wind.tau_decay",
      "trajectory.kind", "trajectory.radius", "trajectory.omega",
      "trajectory.altitude", "trajectory.spiral_growth",
      "trajectory.duration", "trajectory.ramp_time",
      "run.controller", "run.runs", "run.seeds", "run.seed_base",
      "run.dt", "run.log_rate", "run.model", "run.quiet",
      "pid.kp", "pid.ki", "pid.kd", "pid.i_limit",
      "adaptive.kp", "adaptive.kv", "adaptive.lambda_sliding",
      "adaptive.lambda_leak", "adaptive.q", "adaptive.r", "adaptive.r_bar",
      "adaptive.p0", "adaptive.p_floor", "adaptive.lpf_cutoff_hz",
      "adaptive.tilt_max_deg", "adaptive.enabled", "adaptive.init_from_model",
      "sindy.lambda", "sindy.nu", "sindy.threshold", "sindy.max_iter",
      "sindy.tol", "sindy.regularizer", "sindy.smooth_window", "sindy.trim",
      "sindy.min_samples",
  };
  return keys;
}

Vec3 gains_vec(const ConfigFile& f, const std::string& section,
               const std::string& key, const Vec3& def) {
  if (!f.has(section, key)) return def;
  const auto vals = f.get_list(section, key);
  if (vals.size() == 1) return Vec3::Constant(vals[0]);
  if (vals.size() == 3) return {vals[0], vals[1], vals[2]};
  throw ConfigError("config: " + section + "." + key +
                    " must have 1 or 3 components");
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_config(ConfigFile::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& file) {
  for (const auto& [section, entries] : file.sections()) {
    for (const auto& [key, value] : entries) {
      if (!known_keys().count(section + "." + key)) {
        throw ConfigError("config: unknown key '" + section + "." + key + "'");
      }
    }
  }

  ExperimentConfig c;
  c.vehicle.m = file.get_double("vehicle", "mass", c.vehicle.m);
  const double g = file.get_double("vehicle", "gravity", 9.81);
  c.vehicle.g_vec = Vec3(0.0, 0.0, -g);
  c.vehicle.tau_att = file.get_double("vehicle", "tau_att", c.vehicle.tau_att);
  c.vehicle.thrust_min =
      file.get_double("vehicle", "thrust_min", c.vehicle.thrust_min);
  c.vehicle.thrust_max =
      file.get_double("vehicle", "thrust_max", c.vehicle.thrust_max);
  if (!(c.vehicle.m > 0.0) || !(c.vehicle.tau_att > 0.0) ||
      c.vehicle.thrust_min < 0.0 ||
      !(c.vehicle.thrust_min < c.vehicle.thrust_max)) {
    throw ConfigError("config: invalid vehicle parameters");
  }

  c.ou.mu = file.get_vec3("wind", "ou_mu", c.ou.mu);
  c.ou.theta = file.get_double("wind", "ou_theta", c.ou.theta);
  c.ou.sigma = file.get_double("wind", "ou_sigma", c.ou.sigma);
  c.wind.f_mean = file.get_vec3("wind", "f_mean", c.wind.f_mean);
  if (file.has("wind", "f_amp")) {
    const auto amp = file.get_list("wind", "f_amp");
    if (amp.size() != 2) {
      throw ConfigError("config: wind.f_amp must have 2 components (x y)");
    }
    c.wind.f_amp_x = amp[0];
    c.wind.f_amp_y = amp[1];
  }
  c.wind.freq = file.get_double("wind", "freq", c.wind.freq);
  c.wind.phi0 = file.get_double("wind", "phi0", c.wind.phi0);
  c.wind.t_on = file.get_double("wind", "t_on", c.wind.t_on);
  c.wind.t_off = file.get_double("wind", "t_off", c.wind.t_off);
  c.wind.f_cap = file.get_double("wind", "f_cap", c.wind.f_cap);
  c.wind.rate_cap = file.get_double("wind", "rate_cap", c.wind.rate_cap);
  c.wind.tau_decay = file.get_double("wind", "tau_decay", c.wind.tau_decay);
  c.ou.validate();
  c.wind.validate();

  c.trajectory.kind = trajectory_kind_from_string(
      file.get_string("trajectory", "kind", "circle"));
  c.trajectory.radius =
      file.get_double("trajectory", "radius", c.trajectory.radius);
  c.trajectory.omega =
      file.get_double("trajectory", "omega", c.trajectory.omega);
  c.trajectory.altitude =
      file.get_double("trajectory", "altitude", c.trajectory.altitude);
  c.trajectory.spiral_growth = file.get_double("trajectory", "spiral_growth",
                                               c.trajectory.spiral_growth);
  c.trajectory.duration =
      file.get_double("trajectory", "duration", c.trajectory.duration);
  c.trajectory.ramp_time =
      file.get_double("trajectory", "ramp_time", c.trajectory.ramp_time);
  c.trajectory.validate();

  c.controller = file.get_string("run", "controller", c.controller);
  if (c.controller != "asindy" && c.controller != "pid") {
    throw ConfigError("config: run.controller must be 'asindy' or 'pid'");
  }
  c.runs = file.get_int("run", "runs", c.runs);
  if (c.runs < 1) throw ConfigError("config: run.runs must be >= 1");
  c.dt = file.get_double("run", "dt", c.dt);
  if (!(c.dt > 0.0) || c.dt > 0.05) {
    throw ConfigError("config: run.dt must lie in (0, 0.05]");
  }
  c.log_rate = file.get_double("run", "log_rate", c.log_rate);
  if (!(c.log_rate > 0.0) || c.log_rate > 1.0 / c.dt + 1e-9) {
    throw ConfigError("config: run.log_rate must lie in (0, 1/dt]");
  }
  c.quiet = file.get_bool("run", "quiet", false);
  c.model_path = file.get_string("run", "model", "");
  if (!c.model_path.empty() && !std::filesystem::exists(c.model_path)) {
    throw ConfigError("config: run.model file '" + c.model_path +
                      "' does not exist");
  }

  if (file.has("run", "seeds")) {
    for (double v : file.get_list("run", "seeds")) {
      if (v < 0.0 || static_cast<double>(static_cast<std::uint64_t>(v)) != v) {
        throw ConfigError("config: run.seeds must be non-negative integers");
      }
      c.seeds.push_back(static_cast<std::uint64_t>(v));
    }
    if (static_cast<int>(c.seeds.size()) != c.runs) {
      throw ConfigError("config: run.seeds length must equal run.runs");
    }
  } else {
    const int base = file.get_int("run", "seed_base", 1000);
    for (int i = 0; i < c.runs; ++i) {
      c.seeds.push_back(static_cast<std::uint64_t>(base) + i);
    }
  }

  c.pid.kp = gains_vec(file, "pid", "kp", c.pid.kp);
  c.pid.ki = gains_vec(file, "pid", "ki", c.pid.ki);
  c.pid.kd = gains_vec(file, "pid", "kd", c.pid.kd);
  c.pid.i_limit = file.get_double("pid", "i_limit", c.pid.i_limit);
  c.pid.validate();

  c.adaptive.gains.kp = gains_vec(file, "adaptive", "kp", c.adaptive.gains.kp);
  c.adaptive.gains.kv = gains_vec(file, "adaptive", "kv", c.adaptive.gains.kv);
  c.adaptive.gains.lambda_s =
      gains_vec(file, "adaptive", "lambda_sliding", c.adaptive.gains.lambda_s);
  c.adaptive.lambda_leak =
      file.get_double("adaptive", "lambda_leak", c.adaptive.lambda_leak);
  c.adaptive.q = file.get_double("adaptive", "q", c.adaptive.q);
  c.adaptive.r = file.get_double("adaptive", "r", c.adaptive.r);
  c.adaptive.r_bar = file.get_double("adaptive", "r_bar", c.adaptive.r_bar);
  c.adaptive.p0 = file.get_double("adaptive", "p0", c.adaptive.p0);
  c.adaptive.p_floor = file.get_double("adaptive", "p_floor", c.adaptive.p_floor);
  c.adaptive.lpf_cutoff_hz =
      file.get_double("adaptive", "lpf_cutoff_hz", c.adaptive.lpf_cutoff_hz);
  c.adaptive.tilt_max_deg =
      file.get_double("adaptive", "tilt_max_deg", c.adaptive.tilt_max_deg);
  c.adaptive.enabled = file.get_bool("adaptive", "enabled", c.adaptive.enabled);
  c.adaptive.init_from_model =
      file.get_bool("adaptive", "init_from_model", c.adaptive.init_from_model);
  c.adaptive.gains.validate();

  c.sr3.lambda = file.get_double("sindy", "lambda", c.sr3.lambda);
  c.sr3.nu = file.get_double("sindy", "nu", c.sr3.nu);
  c.sr3.threshold = file.get_double("sindy", "threshold", c.sr3.threshold);
  c.sr3.max_iter = file.get_int("sindy", "max_iter", c.sr3.max_iter);
  c.sr3.tol = file.get_double("sindy", "tol", c.sr3.tol);
  const std::string reg = file.get_string("sindy", "regularizer", "l0");
  if (reg == "l0") {
    c.sr3.reg = SR3Settings::Regularizer::L0;
  } else if (reg == "l1") {
    c.sr3.reg = SR3Settings::Regularizer::L1;
  } else {
    throw ConfigError("config: sindy.regularizer must be 'l0' or 'l1'");
  }
  c.build.smooth_window =
      file.get_int("sindy", "smooth_window", c.build.smooth_window);
  c.build.trim = file.get_int("sindy", "trim", c.build.trim);
  c.build.min_samples =
      file.get_int("sindy", "min_samples", c.build.min_samples);

  c.digest = file.digest();
  return c;
}

}  // namespace asindy
