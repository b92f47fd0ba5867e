#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace asindy {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

// 12-state quadrotor state in world ENU coordinates plus timestamp.
// eta = (roll, pitch, yaw) in ZYX convention, each wrapped into (-pi, pi].
struct VehicleState {
  double t = 0.0;
  Vec3 p = Vec3::Zero();      // position [m]
  Vec3 v = Vec3::Zero();      // velocity [m/s]
  Vec3 eta = Vec3::Zero();    // Euler angles [rad]
  Vec3 omega = Vec3::Zero();  // body rates [rad/s]

  bool finite() const {
    return std::isfinite(t) && p.allFinite() && v.allFinite() &&
           eta.allFinite() && omega.allFinite();
  }
};

struct VehicleParams {
  double m = 0.034;          // mass [kg], Crazyflie-class
  Vec3 g_vec{0.0, 0.0, -9.81};  // gravity [m/s^2], ENU (points down)
  double tau_att = 0.08;     // attitude-loop time constant [s]
  double thrust_max = 0.6;   // [N]
  double thrust_min = 0.0;   // [N]

  double hover_thrust() const { return m * g_vec.norm(); }
};

// Collective thrust magnitude plus desired attitude, the interface to the
// simulated low-level loop.
struct ControlCommand {
  double thrust = 0.0;        // [N]
  Vec3 att_des = Vec3::Zero();  // desired Euler angles [rad], yaw held at 0
};

// Rotation body->world for ZYX Euler angles (yaw * pitch * roll).
inline Mat3 rotation_matrix(const Vec3& eta) {
  const double cr = std::cos(eta.x()), sr = std::sin(eta.x());
  const double cp = std::cos(eta.y()), sp = std::sin(eta.y());
  const double cy = std::cos(eta.z()), sy = std::sin(eta.z());
  Mat3 r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp,     cp * sr,                cp * cr;
  return r;
}

// Euler-rate to body-rate kinematic matrix E(eta): omega = E * eta_dot.
inline Mat3 euler_rate_matrix(const Vec3& eta) {
  const double cr = std::cos(eta.x()), sr = std::sin(eta.x());
  const double cp = std::cos(eta.y()), sp = std::sin(eta.y());
  Mat3 e;
  e << 1.0, 0.0, -sp,
       0.0, cr,  sr * cp,
       0.0, -sr, cr * cp;
  return e;
}

}  // namespace asindy
