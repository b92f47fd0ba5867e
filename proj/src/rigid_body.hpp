#pragma once

#include "types.hpp"

namespace asindy {

// Time derivative of the 12-dimensional vehicle state.
struct StateDerivative {
  Vec3 p_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Vec3 eta_dot = Vec3::Zero();
  Vec3 omega_dot = Vec3::Zero();
};

// Known dynamics f(x,u): point-mass translation under rotated collective
// thrust and gravity, first-order attitude lag toward the commanded attitude.
// Wind never enters here; disturbances are injected separately in step().
StateDerivative known_dynamics(const VehicleState& state,
                               const ControlCommand& cmd,
                               const VehicleParams& params);

// Advance one fixed step with classic RK4 over known_dynamics plus the
// external force f_ext applied to the translational acceleration.
// Throws ConfigError for dt outside (0, 0.05] and SimDivergenceError if the
// integration produces a non-finite state.
VehicleState step(const VehicleState& state, const ControlCommand& cmd,
                  const Vec3& f_ext, const VehicleParams& params, double dt);

}  // namespace asindy
