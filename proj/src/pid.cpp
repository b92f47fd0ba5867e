#include "pid.hpp"

#include <algorithm>

#include "errors.hpp"

namespace asindy {

void PidGains::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (kp[i] < 0.0 || ki[i] < 0.0 || kd[i] < 0.0) {
      throw ConfigError("pid: gains must be >= 0");
    }
  }
  if (!(i_limit > 0.0)) throw ConfigError("pid: i_limit must be > 0");
}

PidStep pid_step(const VehicleState& state, const ReferenceSample& ref,
                 const PidGains& gains, const PidState& integ,
                 const VehicleParams& params, double dt, double tilt_max) {
  gains.validate();
  if (!(dt > 0.0)) throw DomainError("pid_step: dt must be > 0");

  PidStep out;
  out.debug.e_p = state.p - ref.p_d;
  out.debug.e_v = state.v - ref.v_d;

  out.state.integral = integ.integral + out.debug.e_p * dt;
  for (int i = 0; i < 3; ++i) {
    out.state.integral[i] =
        std::clamp(out.state.integral[i], -gains.i_limit, gains.i_limit);
  }

  out.debug.a_cmd = ref.a_d - gains.kp.cwiseProduct(out.debug.e_p) -
                    gains.kd.cwiseProduct(out.debug.e_v) -
                    gains.ki.cwiseProduct(out.state.integral);

  out.debug.f_desired = desired_force(out.debug.a_cmd, Vec3::Zero(), params);
  const AttitudeThrust at =
      force_to_attitude_thrust(out.debug.f_desired, params, tilt_max);
  out.cmd = at.cmd;
  out.debug.fallback = at.fallback;
  return out;
}

}  // namespace asindy
