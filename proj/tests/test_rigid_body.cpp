#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "rigid_body.hpp"

using namespace asindy;

namespace {

VehicleParams crazyflie() { return VehicleParams{}; }

ControlCommand hover_cmd(const VehicleParams& p) {
  return {p.hover_thrust(), Vec3::Zero()};
}

}  // namespace

TEST_CASE("hover is an equilibrium of the known dynamics") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  s.v = Vec3(0.2, -0.1, 0.05);
  const StateDerivative d = known_dynamics(s, hover_cmd(p), p);
  CHECK(d.v_dot.norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((d.p_dot - s.v).norm() == doctest::Approx(0.0));
  CHECK(d.eta_dot.norm() == doctest::Approx(0.0));
}

TEST_CASE("zero thrust gives free fall") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  const StateDerivative d = known_dynamics(s, {0.0, Vec3::Zero()}, p);
  CHECK((d.v_dot - p.g_vec).norm() == doctest::Approx(0.0));
}

TEST_CASE("pitch-only tilt: thrust mg/cos(theta) holds altitude") {
  // Independent analytic evaluation of the rotation for a pitch-only tilt:
  // R(0,theta,0) * (0,0,T) = (T sin(theta), 0, T cos(theta)).
  const VehicleParams p = crazyflie();
  const double g = -p.g_vec.z();
  for (double theta : {0.02, 0.1, 0.25}) {
    VehicleState s;
    s.eta = Vec3(0.0, theta, 0.0);
    const double thrust = p.m * g / std::cos(theta);
    const StateDerivative d = known_dynamics(s, {thrust, s.eta}, p);
    CHECK(d.v_dot.z() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.v_dot.x() == doctest::Approx(g * std::tan(theta)).epsilon(1e-12));
    CHECK(d.v_dot.y() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("roll-only tilt pushes along -y") {
  const VehicleParams p = crazyflie();
  const double phi = 0.15, thrust = 0.4;
  VehicleState s;
  s.eta = Vec3(phi, 0.0, 0.0);
  const StateDerivative d = known_dynamics(s, {thrust, s.eta}, p);
  CHECK(d.v_dot.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.v_dot.y() ==
        doctest::Approx(-thrust * std::sin(phi) / p.m).epsilon(1e-12));
  CHECK(d.v_dot.z() ==
        doctest::Approx(thrust * std::cos(phi) / p.m + p.g_vec.z())
            .epsilon(1e-12));
}

TEST_CASE("known_dynamics rejects bad inputs") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  SUBCASE("non-finite state") {
    s.v.x() = std::nan("");
    CHECK_THROWS_AS(known_dynamics(s, hover_cmd(p), p), DomainError);
  }
  SUBCASE("thrust above saturation") {
    CHECK_THROWS_AS(known_dynamics(s, {p.thrust_max * 2.0, Vec3::Zero()}, p),
                    DomainError);
  }
  SUBCASE("negative thrust") {
    CHECK_THROWS_AS(known_dynamics(s, {-0.1, Vec3::Zero()}, p), DomainError);
  }
}

TEST_CASE("hover step leaves position unchanged") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  const VehicleState next = step(s, hover_cmd(p), Vec3::Zero(), p, 0.01);
  CHECK(next.p.norm() < 1e-9);
  CHECK(next.v.norm() < 1e-9);
  CHECK(next.t == doctest::Approx(0.01));
}

TEST_CASE("constant lateral force integrates to the closed form") {
  const VehicleParams p = crazyflie();
  const Vec3 f_ext(0.1 * p.m, 0.0, 0.0);
  VehicleState s;
  const double dt = 0.01;
  for (int k = 0; k < 100; ++k) s = step(s, hover_cmd(p), f_ext, p, dt);
  CHECK(s.v.x() == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(s.p.x() == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("ballistic drop matches -g t^2 / 2") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  const double dt = 0.01;
  for (int k = 0; k < 100; ++k) s = step(s, {0.0, Vec3::Zero()}, Vec3::Zero(), p, dt);
  CHECK(s.p.z() == doctest::Approx(0.5 * p.g_vec.z()).epsilon(1e-4));
}

TEST_CASE("step rejects out-of-range dt") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  CHECK_THROWS_AS(step(s, hover_cmd(p), Vec3::Zero(), p, 0.0), ConfigError);
  CHECK_THROWS_AS(step(s, hover_cmd(p), Vec3::Zero(), p, -0.004), ConfigError);
  CHECK_THROWS_AS(step(s, hover_cmd(p), Vec3::Zero(), p, 0.06), ConfigError);
}

TEST_CASE("ballistic flight conserves mechanical energy") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  s.v = Vec3(0.3, -0.2, 0.5);
  const double g = -p.g_vec.z();
  auto energy = [&](const VehicleState& st) {
    return 0.5 * p.m * st.v.squaredNorm() + p.m * g * st.p.z();
  };
  const double e0 = energy(s);
  for (int k = 0; k < 1000; ++k) s = step(s, {0.0, Vec3::Zero()}, Vec3::Zero(), p, 0.01);
  CHECK(std::abs(energy(s) - e0) <= 1e-6 * std::abs(e0));
}

TEST_CASE("attitude lag follows the first-order closed form") {
  const VehicleParams p = crazyflie();
  VehicleState s;
  const Vec3 att_des(0.1, -0.05, 0.0);
  const double dt = 0.002;
  for (int k = 0; k < 100; ++k) s = step(s, {p.hover_thrust(), att_des}, Vec3::Zero(), p, dt);
  const double t = 100 * dt;
  const Vec3 expected = att_des * (1.0 - std::exp(-t / p.tau_att));
  CHECK((s.eta - expected).norm() < 1e-8);
}

TEST_CASE("RK4 order: halving dt cuts the error by at least 8x") {
  const VehicleParams p = crazyflie();
  // Smooth hover perturbation: slight tilt command and thrust offset.
  const ControlCommand cmd{p.hover_thrust() * 1.02, Vec3(0.05, -0.04, 0.0)};

  auto integrate = [&](double dt) {
    VehicleState s;
    const long n = std::lround(1.0 / dt);
    for (long k = 0; k < n; ++k) s = step(s, cmd, Vec3::Zero(), p, dt);
    return s;
  };

  const VehicleState ref = integrate(1e-5);
  const double err_coarse = (integrate(0.01).p - ref.p).norm();
  const double err_fine = (integrate(0.005).p - ref.p).norm();
  CHECK(err_fine > 0.0);
  CHECK(err_coarse / err_fine >= 8.0);
}
