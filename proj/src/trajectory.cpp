#include "trajectory.hpp"

#include <cmath>

#include "errors.hpp"

namespace asindy {

TrajectoryKind trajectory_kind_from_string(const std::string& name) {
  if (name == "circle") return TrajectoryKind::Circle;
  if (name == "lemniscate" || name == "infinity") return TrajectoryKind::Lemniscate;
  if (name == "spiral") return TrajectoryKind::Spiral;
  throw ConfigError("trajectory: unknown kind '" + name + "'");
}

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Lemniscate: return "lemniscate";
    case TrajectoryKind::Spiral: return "spiral";
  }
  return "?";
}

void TrajectorySpec::validate() const {
  if (!(radius > 0.0)) throw ConfigError("trajectory: radius must be > 0");
  if (!(omega > 0.0)) throw ConfigError("trajectory: omega must be > 0");
  if (!(duration > 0.0)) throw ConfigError("trajectory: duration must be > 0");
  if (ramp_time < 0.0) throw ConfigError("trajectory: ramp_time must be >= 0");
}

namespace {

// Smoothed clock s(t): rate r(t) is the quintic smoothstep 6u^5-15u^4+10u^3
// on [0, ramp_time] and 1 afterwards. Returns s, s_dot = r, s_ddot = r_dot.
struct Clock {
  double s, s_dot, s_ddot;
};

Clock smoothed_clock(double t, double ramp) {
  if (ramp <= 0.0 || t >= ramp) {
    const double s0 = ramp > 0.0 ? 0.5 * ramp : 0.0;
    return {s0 + (t - ramp), 1.0, 0.0};
  }
  const double u = t / ramp;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double s = ramp * (u5 * u - 3.0 * u5 + 2.5 * u4);
  const double r = 6.0 * u5 - 15.0 * u4 + 10.0 * u3;
  const double r_dot = (30.0 * u4 - 60.0 * u3 + 30.0 * u2) / ramp;
  return {s, r, r_dot};
}

// Planar shape and its first two derivatives with respect to the phase.
struct Shape {
  Vec3 p, dp, ddp;
};

Shape shape_at(const TrajectorySpec& spec, double alpha) {
  const double r = spec.radius;
  const double c = std::cos(alpha), s = std::sin(alpha);
  switch (spec.kind) {
    case TrajectoryKind::Circle:
      return {{r * c, r * s, spec.altitude},
              {-r * s, r * c, 0.0},
              {-r * c, -r * s, 0.0}};
    case TrajectoryKind::Lemniscate: {
      // Gerono figure-eight: x = r sin(a), y = r sin(a) cos(a) = r/2 sin(2a).
      const double c2 = std::cos(2.0 * alpha), s2 = std::sin(2.0 * alpha);
      return {{r * s, 0.5 * r * s2, spec.altitude},
              {r * c, r * c2, 0.0},
              {-r * s, -2.0 * r * s2, 0.0}};
    }
    case TrajectoryKind::Spiral: {
      const double rho = r + spec.spiral_growth * alpha;
      const double g = spec.spiral_growth;
      return {{rho * c, rho * s, spec.altitude},
              {g * c - rho * s, g * s + rho * c, 0.0},
              {-2.0 * g * s - rho * c, 2.0 * g * c - rho * s, 0.0}};
    }
  }
  throw DomainError("trajectory: unreachable kind");
}

}  // namespace

ReferenceSample sample(const TrajectorySpec& spec, double t) {
  spec.validate();
  if (t < 0.0 || t > spec.duration) {
    throw DomainError("trajectory: t outside [0, duration]");
  }
  const Clock clk = smoothed_clock(t, spec.ramp_time);
  const double alpha = spec.omega * clk.s;
  const double alpha_dot = spec.omega * clk.s_dot;
  const double alpha_ddot = spec.omega * clk.s_ddot;
  const Shape sh = shape_at(spec, alpha);

  ReferenceSample out;
  out.t = t;
  out.p_d = sh.p;
  out.v_d = sh.dp * alpha_dot;
  out.a_d = sh.ddp * (alpha_dot * alpha_dot) + sh.dp * alpha_ddot;
  return out;
}

}  // namespace asindy
