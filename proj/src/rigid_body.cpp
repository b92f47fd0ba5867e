#include "rigid_body.hpp"

#include <cmath>

#include "errors.hpp"

namespace asindy {

namespace {

Vec3 wrap_eta(const Vec3& eta) {
  return {wrap_angle(eta.x()), wrap_angle(eta.y()), wrap_angle(eta.z())};
}

// d/dt of euler_rate_matrix along the current attitude motion.
Mat3 euler_rate_matrix_dot(const Vec3& eta, const Vec3& eta_dot) {
  const double cr = std::cos(eta.x()), sr = std::sin(eta.x());
  const double cp = std::cos(eta.y()), sp = std::sin(eta.y());
  const double rd = eta_dot.x(), pd = eta_dot.y();
  Mat3 e;
  e << 0.0, 0.0, -cp * pd,
       0.0, -sr * rd, cr * rd * cp - sr * sp * pd,
       0.0, -cr * rd, -sr * rd * cp - cr * sp * pd;
  return e;
}

VehicleState advance(const VehicleState& s, const StateDerivative& d, double h) {
  VehicleState out = s;
  out.p += h * d.p_dot;
  out.v += h * d.v_dot;
  out.eta += h * d.eta_dot;
  out.omega += h * d.omega_dot;
  return out;
}

}  // namespace

StateDerivative known_dynamics(const VehicleState& state,
                               const ControlCommand& cmd,
                               const VehicleParams& params) {
  if (!state.finite() || !std::isfinite(cmd.thrust) || !cmd.att_des.allFinite()) {
    throw DomainError("known_dynamics: non-finite input");
  }
  if (cmd.thrust < params.thrust_min - 1e-12 ||
      cmd.thrust > params.thrust_max + 1e-12) {
    throw DomainError("known_dynamics: thrust outside saturation bounds");
  }

  StateDerivative d;
  d.p_dot = state.v;
  d.v_dot = rotation_matrix(state.eta) * Vec3(0.0, 0.0, cmd.thrust) / params.m +
            params.g_vec;

  // First-order attitude lag; the error is wrapped so the loop never takes
  // the long way around.
  Vec3 att_err(wrap_angle(cmd.att_des.x() - state.eta.x()),
               wrap_angle(cmd.att_des.y() - state.eta.y()),
               wrap_angle(cmd.att_des.z() - state.eta.z()));
  d.eta_dot = att_err / params.tau_att;

  // omega = E(eta) * eta_dot, so omega_dot = E_dot * eta_dot + E * eta_ddot
  // with eta_ddot = -eta_dot / tau_att for the lag above.
  const Vec3 eta_ddot = -d.eta_dot / params.tau_att;
  d.omega_dot = euler_rate_matrix_dot(state.eta, d.eta_dot) * d.eta_dot +
                euler_rate_matrix(state.eta) * eta_ddot;
  return d;
}

VehicleState step(const VehicleState& state, const ControlCommand& cmd,
                  const Vec3& f_ext, const VehicleParams& params, double dt) {
  if (!(dt > 0.0) || dt > 0.05) {
    throw ConfigError("step: dt must lie in (0, 0.05] s");
  }
  const Vec3 a_ext = f_ext / params.m;

  auto deriv = [&](const VehicleState& s) {
    StateDerivative d = known_dynamics(s, cmd, params);
    d.v_dot += a_ext;
    return d;
  };

  const StateDerivative k1 = deriv(state);
  const StateDerivative k2 = deriv(advance(state, k1, 0.5 * dt));
  const StateDerivative k3 = deriv(advance(state, k2, 0.5 * dt));
  const StateDerivative k4 = deriv(advance(state, k3, dt));

  VehicleState next = state;
  next.p += dt / 6.0 * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
  next.v += dt / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  next.eta +=
      dt / 6.0 * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot);
  next.eta = wrap_eta(next.eta);
  next.t = state.t + dt;

  // Body rates are slaved to the attitude lag; refresh them from the
  // kinematic map so the omega invariant holds exactly at sample points.
  Vec3 att_err(wrap_angle(cmd.att_des.x() - next.eta.x()),
               wrap_angle(cmd.att_des.y() - next.eta.y()),
               wrap_angle(cmd.att_des.z() - next.eta.z()));
  next.omega = euler_rate_matrix(next.eta) * (att_err / params.tau_att);

  if (!next.finite()) {
    throw SimDivergenceError("step: integration produced a non-finite state",
                             std::lround(next.t / dt));
  }
  return next;
}

}  // namespace asindy
