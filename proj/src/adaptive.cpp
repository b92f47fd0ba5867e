#include "adaptive.hpp"

#include <cmath>

#include "errors.hpp"

namespace asindy {

void ControllerGains::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(kp[i] > 0.0) || !(kv[i] > 0.0) || !(lambda_s[i] > 0.0)) {
      throw ConfigError("gains: diagonal entries must be > 0");
    }
  }
}

AdaptationState AdaptationState::init(int n_terms, double p0,
                                      double lambda_leak, double q, double r,
                                      double r_bar, double p_floor) {
  if (n_terms < 1) throw ConfigError("adaptation: need at least one feature");
  if (!(p0 > 0.0)) throw ConfigError("adaptation: p0 must be > 0");
  if (!(r > 0.0) || !(r_bar > 0.0)) {
    throw ConfigError("adaptation: R and R_bar must be > 0");
  }
  if (lambda_leak < 0.0 || q < 0.0) {
    throw ConfigError("adaptation: lambda_leak and q must be >= 0");
  }
  AdaptationState s;
  s.A = Eigen::MatrixXd::Zero(n_terms, 3);
  s.P = p0 * Eigen::MatrixXd::Identity(n_terms, n_terms);
  s.Q = q * Eigen::MatrixXd::Identity(n_terms, n_terms);
  s.lambda_leak = lambda_leak;
  s.R = r;
  s.R_bar = r_bar;
  s.p_floor = p_floor;
  return s;
}

double AdaptationState::min_p_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double AdaptationState::p_symmetry_residual() const {
  return (P - P.transpose()).cwiseAbs().maxCoeff();
}

void AdaptationState::validate() const {
  if (!A.allFinite() || !P.allFinite()) {
    throw AdaptationDivergenceError("adaptation: non-finite state", -1);
  }
  if (p_symmetry_residual() > 1e-10) {
    throw AdaptationDivergenceError("adaptation: P asymmetric", -1);
  }
  if (min_p_eigenvalue() < p_floor * (1.0 - 1e-9)) {
    throw AdaptationDivergenceError("adaptation: P below eigenvalue floor", -1);
  }
}

ActiveFeatures ActiveFeatures::from_model(const SindyModel& model) {
  ActiveFeatures f;
  f.library = model.library;
  f.active = model.active_terms();
  if (f.active.empty()) {
    // Empty model: adapt over the whole library rather than nothing.
    for (std::size_t i = 0; i < f.library.size(); ++i) {
      f.active.push_back(static_cast<int>(i));
    }
  }
  return f;
}

ActiveFeatures ActiveFeatures::full(const LibrarySpec& library) {
  ActiveFeatures f;
  f.library = library;
  for (std::size_t i = 0; i < library.size(); ++i) {
    f.active.push_back(static_cast<int>(i));
  }
  return f;
}

Eigen::RowVectorXd ActiveFeatures::eval(const VehicleState& state,
                                        double thrust) const {
  const Eigen::RowVectorXd all = eval_library(state, thrust, library);
  Eigen::RowVectorXd out(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) out(i) = all(active[i]);
  return out;
}

ControllerMemory ControllerMemory::initial(const VehicleParams& params) {
  ControllerMemory m;
  m.thrust_prev = params.hover_thrust();
  return m;
}

Vec3 pd_command(const VehicleState& state, const ReferenceSample& ref,
                const ControllerGains& gains) {
  if (!state.finite()) throw DomainError("pd_command: non-finite state");
  const Vec3 e_p = state.p - ref.p_d;
  const Vec3 e_v = state.v - ref.v_d;
  return ref.a_d - gains.kp.cwiseProduct(e_p) - gains.kv.cwiseProduct(e_v);
}

Vec3 residual_proxy(const Vec3& a_meas, const Vec3& u_prev_world,
                    const VehicleParams& params) {
  if (!a_meas.allFinite() || !u_prev_world.allFinite()) {
    throw DomainError("residual_proxy: non-finite input");
  }
  return params.m * a_meas - params.m * params.g_vec - u_prev_world;
}

Vec3 estimate_disturbance(const Eigen::RowVectorXd& phi,
                          const AdaptationState& adapt) {
  if (phi.cols() != adapt.A.rows()) {
    throw DomainError("estimate_disturbance: feature/adaptation size mismatch");
  }
  return (phi * adapt.A).transpose();
}

AdaptationState rls_update(const AdaptationState& adapt,
                           const Eigen::RowVectorXd& phi, const Vec3& f_dist,
                           const Vec3& f_hat, const Vec3& s, double dt) {
  if (!(dt > 0.0)) throw DomainError("rls_update: dt must be > 0");
  if (phi.cols() != adapt.A.rows()) {
    throw DomainError("rls_update: feature/adaptation size mismatch");
  }

  const Eigen::VectorXd p_phi = adapt.P * phi.transpose();  // n x 1
  const Eigen::RowVector3d err = (f_hat - f_dist).transpose();

  AdaptationState next = adapt;
  const Eigen::MatrixXd a_dot = -adapt.lambda_leak * adapt.A -
                                p_phi * (err / adapt.R) +
                                p_phi * s.transpose();
  const Eigen::MatrixXd p_dot = -2.0 * adapt.lambda_leak * adapt.P + adapt.Q -
                                (p_phi * p_phi.transpose()) / adapt.R_bar;
  next.A += dt * a_dot;
  next.P += dt * p_dot;

  if (!next.A.allFinite() || !next.P.allFinite()) {
    throw AdaptationDivergenceError("rls_update: non-finite update", -1);
  }

  next.P = 0.5 * (next.P + next.P.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(next.P);
  if (es.eigenvalues().minCoeff() < adapt.p_floor) {
    const Eigen::VectorXd floored =
        es.eigenvalues().cwiseMax(adapt.p_floor);
    next.P = es.eigenvectors() * floored.asDiagonal() *
             es.eigenvectors().transpose();
    next.P = 0.5 * (next.P + next.P.transpose()).eval();
  }
  return next;
}

Vec3 desired_force(const Vec3& a_cmd, const Vec3& f_hat,
                   const VehicleParams& params) {
  if (!a_cmd.allFinite() || !f_hat.allFinite()) {
    throw DomainError("desired_force: non-finite input");
  }
  return params.m * a_cmd + params.m * params.g_vec - f_hat;
}

AttitudeThrust force_to_attitude_thrust(const Vec3& f_desired,
                                        const VehicleParams& params,
                                        double tilt_max) {
  // Rotor-supported force: flip the gravity contribution of F_d back to the
  // compensation direction. At hover this is (0, 0, +mg).
  const Vec3 f_support = f_desired - 2.0 * params.m * params.g_vec;
  const double mag = f_support.norm();
  const double hover = params.hover_thrust();

  AttitudeThrust out;
  if (!f_support.allFinite() || mag < 0.05 * hover || f_support.z() <= 0.0) {
    out.cmd.thrust = std::clamp(hover, params.thrust_min, params.thrust_max);
    out.cmd.att_des = Vec3::Zero();
    out.fallback = true;
    return out;
  }

  out.cmd.thrust = std::clamp(mag, params.thrust_min, params.thrust_max);

  Vec3 b3 = f_support / mag;  // desired body z axis
  const double tilt = std::acos(std::clamp(b3.z(), -1.0, 1.0));
  if (tilt > tilt_max) {
    const double h = std::hypot(b3.x(), b3.y());
    const double scale = std::sin(tilt_max) / h;
    b3 = Vec3(b3.x() * scale, b3.y() * scale, std::cos(tilt_max));
  }
  // ZYX angles with yaw = 0: R e3 = (sin(pitch) cos(roll), -sin(roll),
  // cos(pitch) cos(roll)).
  const double roll = std::asin(std::clamp(-b3.y(), -1.0, 1.0));
  const double pitch = std::atan2(b3.x(), b3.z());
  out.cmd.att_des = Vec3(roll, pitch, 0.0);
  return out;
}

AsindyStep control_step(const VehicleState& state, const ReferenceSample& ref,
                        const ControllerGains& gains,
                        const AdaptationState& adapt,
                        const ControllerMemory& memory,
                        const ActiveFeatures& features,
                        const VehicleParams& params, const AsindyOptions& opts,
                        double dt) {
  gains.validate();
  if (!(dt > 0.0)) throw DomainError("control_step: dt must be > 0");

  AsindyStep out;
  out.adapt = adapt;
  out.memory = memory;

  const Vec3 u_prev_world =
      rotation_matrix(state.eta) * Vec3(0.0, 0.0, memory.thrust_prev);

  out.debug.e_p = state.p - ref.p_d;
  out.debug.e_v = state.v - ref.v_d;
  out.debug.a_cmd = pd_command(state, ref, gains);

  Vec3 a_raw = Vec3::Zero();
  if (memory.primed) a_raw = (state.v - memory.v_prev) / dt;
  Vec3 a_meas = a_raw;
  if (opts.lpf_cutoff_hz > 0.0) {
    const double tau = 1.0 / (2.0 * M_PI * opts.lpf_cutoff_hz);
    const double alpha = dt / (tau + dt);
    a_meas = memory.a_meas_filt + alpha * (a_raw - memory.a_meas_filt);
  }

  out.debug.f_dist = residual_proxy(a_meas, u_prev_world, params);

  const Eigen::RowVectorXd phi = features.eval(state, memory.thrust_prev);
  out.debug.f_hat = estimate_disturbance(phi, adapt);
  out.debug.s = out.debug.e_v + gains.lambda_s.cwiseProduct(out.debug.e_p);

  if (opts.adaptation_enabled) {
    out.adapt = rls_update(adapt, phi, out.debug.f_dist, out.debug.f_hat,
                           out.debug.s, dt);
  }

  out.debug.f_desired = desired_force(out.debug.a_cmd, out.debug.f_hat, params);
  const AttitudeThrust at =
      force_to_attitude_thrust(out.debug.f_desired, params, opts.tilt_max);
  out.cmd = at.cmd;
  out.debug.fallback = at.fallback;

  out.memory.primed = true;
  out.memory.v_prev = state.v;
  out.memory.a_meas_filt = a_meas;
  out.memory.thrust_prev = out.cmd.thrust;
  return out;
}

}  // namespace asindy
