#pragma once

#include <Eigen/Dense>
#include <vector>

#include "library.hpp"
#include "sindy.hpp"
#include "trajectory.hpp"
#include "types.hpp"

namespace asindy {

// Diagonal PD and sliding-surface gains.
struct ControllerGains {
  Vec3 kp{6.0, 6.0, 6.0};        // [1/s^2]
  Vec3 kv{4.0, 4.0, 4.0};        // [1/s]
  Vec3 lambda_s{1.5, 1.5, 1.5};  // [1/s]

  void validate() const;
};

// Leaky-RLS adaptation state plus its hyperparameters. P is kept symmetric
// positive definite (eigenvalues floored at p_floor) after every update.
struct AdaptationState {
  Eigen::MatrixXd A;  // n_terms x 3 [N per unit feature]
  Eigen::MatrixXd P;  // n_terms x n_terms
  double lambda_leak = 0.3;  // [1/s]
  Eigen::MatrixXd Q;  // process noise, n x n
  double R = 0.5;     // measurement-error scalar
  double R_bar = 0.5; // covariance-update noise scalar
  double p_floor = 1e-6;

  static AdaptationState init(int n_terms, double p0 = 1.0,
                              double lambda_leak = 0.3, double q = 0.01,
                              double r = 0.5, double r_bar = 0.5,
                              double p_floor = 1e-6);

  double min_p_eigenvalue() const;
  double p_symmetry_residual() const;
  void validate() const;
};

// Per-step controller internals, logged for every sample.
struct ControlDebug {
  Vec3 e_p = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 a_cmd = Vec3::Zero();
  Vec3 f_dist = Vec3::Zero();
  Vec3 f_hat = Vec3::Zero();
  Vec3 s = Vec3::Zero();
  Vec3 f_desired = Vec3::Zero();
  bool fallback = false;
};

// Active feature subset: which library terms the online estimator evaluates.
// Built from an identified model's nonzero rows, or the full library when no
// model is supplied (or the model is empty).
struct ActiveFeatures {
  LibrarySpec library;
  std::vector<int> active;

  static ActiveFeatures from_model(const SindyModel& model);
  static ActiveFeatures full(const LibrarySpec& library);

  std::size_t size() const { return active.size(); }
  Eigen::RowVectorXd eval(const VehicleState& state, double thrust) const;
};

struct AsindyOptions {
  double tilt_max = 35.0 * M_PI / 180.0;  // [rad]
  double lpf_cutoff_hz = 15.0;            // a_meas low-pass; <= 0 disables
  bool adaptation_enabled = true;
};

// Finite-difference / filter memory carried between steps.
struct ControllerMemory {
  bool primed = false;
  Vec3 v_prev = Vec3::Zero();
  Vec3 a_meas_filt = Vec3::Zero();
  double thrust_prev = 0.0;  // set to hover thrust on first use

  static ControllerMemory initial(const VehicleParams& params);
};

// --- Algorithm building blocks ------------------------------------------

// a_cmd = a_d - Kp e_p - Kv e_v.
Vec3 pd_command(const VehicleState& state, const ReferenceSample& ref,
                const ControllerGains& gains);

// Residual force proxy: m a_meas - m g_vec - u_prev (world frame), zero at
// an undisturbed hover.
Vec3 residual_proxy(const Vec3& a_meas, const Vec3& u_prev_world,
                    const VehicleParams& params);

// f_hat = phi A.
Vec3 estimate_disturbance(const Eigen::RowVectorXd& phi,
                          const AdaptationState& adapt);

// Explicit-Euler step of the leaky RLS law
//   A_dot = -lambda A - P phi^T ((f_hat - f_dist)/R) + P phi^T s^T
//   P_dot = -2 lambda P + Q - (1/R_bar) P phi^T phi P
// followed by symmetrization and the eigenvalue floor on P.
AdaptationState rls_update(const AdaptationState& adapt,
                           const Eigen::RowVectorXd& phi, const Vec3& f_dist,
                           const Vec3& f_hat, const Vec3& s, double dt);

// F_d = m a_cmd + m g_vec - f_hat.
Vec3 desired_force(const Vec3& a_cmd, const Vec3& f_hat,
                   const VehicleParams& params);

struct AttitudeThrust {
  ControlCommand cmd;
  bool fallback = false;
};

// Map the desired force to collective thrust and a yaw-zero attitude. The
// rotor-supported force is F_d - 2 m g_vec (gravity enters F_d with the
// opposite sign to what the rotor must supply). Degenerate support forces
// produce a level hover command with the fallback flag set.
AttitudeThrust force_to_attitude_thrust(const Vec3& f_desired,
                                        const VehicleParams& params,
                                        double tilt_max = 35.0 * M_PI / 180.0);

// --- Full control step ---------------------------------------------------

struct AsindyStep {
  ControlCommand cmd;
  AdaptationState adapt;
  ControllerMemory memory;
  ControlDebug debug;
};

// One pass of the adaptive loop: errors, PD command, residual proxy from
// finite-differenced velocity, feature-based estimate, leaky RLS update,
// desired force, thrust/attitude conversion. Pure in all inputs.
AsindyStep control_step(const VehicleState& state, const ReferenceSample& ref,
                        const ControllerGains& gains,
                        const AdaptationState& adapt,
                        const ControllerMemory& memory,
                        const ActiveFeatures& features,
                        const VehicleParams& params, const AsindyOptions& opts,
                        double dt);

}  // namespace asindy
