#pragma once

#include <string>

#include "types.hpp"

namespace asindy {

enum class TrajectoryKind { Circle, Lemniscate, Spiral };

TrajectoryKind trajectory_kind_from_string(const std::string& name);
std::string to_string(TrajectoryKind kind);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Circle;
  double radius = 0.6;         // [m]
  double omega = 0.8;          // [rad/s]
  double altitude = 0.8;       // [m]
  double spiral_growth = 0.05; // [m/rad], spiral only
  double duration = 40.0;      // [s]
  double ramp_time = 2.0;      // [s]

  void validate() const;
};

// Position, velocity, acceleration reference r(t) in R^9.
struct ReferenceSample {
  double t = 0.0;
  Vec3 p_d = Vec3::Zero();
  Vec3 v_d = Vec3::Zero();
  Vec3 a_d = Vec3::Zero();
};

// Evaluate the reference at time t in [0, duration]. The angular phase runs
// on a smoothed clock whose rate ramps 0 -> 1 with a quintic profile over
// ramp_time, so v_d(0) = a_d(0) = 0 exactly. Derivatives are analytic.
ReferenceSample sample(const TrajectorySpec& spec, double t);

}  // namespace asindy
