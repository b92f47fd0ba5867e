#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace asindy {

// Per-sample event markers.
enum RunEvent : int {
  kEventNone = 0,
  kEventFallback = 1,  // degenerate desired force, hover fallback issued
  kEventCrash = 2,     // crash gate tripped at this sample
};

// One logged sample: reference, state, command, wind, and controller debug.
struct RunLogRow {
  double t = 0.0;
  Vec3 p_d = Vec3::Zero(), v_d = Vec3::Zero(), a_d = Vec3::Zero();
  Vec3 p = Vec3::Zero(), v = Vec3::Zero();
  Vec3 eta = Vec3::Zero(), omega = Vec3::Zero();
  double thrust = 0.0;
  Vec3 att_des = Vec3::Zero();
  Vec3 f_wind = Vec3::Zero(), a_wind = Vec3::Zero();
  Vec3 f_dist = Vec3::Zero(), f_hat = Vec3::Zero(), s = Vec3::Zero();
  Vec3 e_p = Vec3::Zero(), e_v = Vec3::Zero();
  int event = kEventNone;
};

// Uniform-rate record of one run. The CSV schema is versioned; writers emit
// 17 significant digits so reloads are bit-exact.
struct RunLog {
  std::vector<RunLogRow> rows;

  // Throws DataError unless timestamps strictly increase and the sampling
  // period never deviates from its median by more than max_jitter (relative).
  void validate_timing(double max_jitter) const;

  double median_dt() const;
};

void save_runlog(const RunLog& log, const std::string& path);
RunLog load_runlog(const std::string& path);

inline VehicleState state_from(const RunLogRow& row) {
  VehicleState s;
  s.t = row.t;
  s.p = row.p;
  s.v = row.v;
  s.eta = row.eta;
  s.omega = row.omega;
  return s;
}

inline ControlCommand command_from(const RunLogRow& row) {
  return {row.thrust, row.att_des};
}

// Exact schema line order for the current version, exposed for tests.
extern const char* const kRunLogSchemaTag;

}  // namespace asindy
