#pragma once

#include "adaptive.hpp"
#include "trajectory.hpp"
#include "types.hpp"

namespace asindy {

// Diagonal PID position gains with a per-axis integrator clamp.
struct PidGains {
  Vec3 kp{6.0, 6.0, 6.0};
  Vec3 ki{0.5, 0.5, 0.5};
  Vec3 kd{4.0, 4.0, 4.0};
  double i_limit = 0.5;  // [m s]

  void validate() const;
};

struct PidState {
  Vec3 integral = Vec3::Zero();
};

struct PidStep {
  ControlCommand cmd;
  PidState state;
  ControlDebug debug;  // f_dist/f_hat stay zero for the baseline
};

// a_cmd = a_d - Kp e_p - Kd e_v - Ki * integral(e_p), integral clamped to
// +/- i_limit per axis; desired force and the thrust/attitude mapping are
// shared with the adaptive controller.
PidStep pid_step(const VehicleState& state, const ReferenceSample& ref,
                 const PidGains& gains, const PidState& integ,
                 const VehicleParams& params, double dt,
                 double tilt_max = 35.0 * M_PI / 180.0);

}  // namespace asindy
