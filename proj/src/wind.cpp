#include "wind.hpp"

#include <cmath>

#include "errors.hpp"

namespace asindy {

void OUParams::validate() const {
  if (!(theta > 0.0)) throw ConfigError("wind: ou theta must be > 0");
  if (sigma < 0.0) throw ConfigError("wind: ou sigma must be >= 0");
  if (!mu.allFinite()) throw ConfigError("wind: ou mu must be finite");
}

void WindCompositionParams::validate() const {
  if (t_on < 0.0 || t_off < 0.0 || !(t_on + t_off > 0.0)) {
    throw ConfigError("wind: need t_on >= 0, t_off >= 0, t_on + t_off > 0");
  }
  if (!(f_cap > 0.0)) throw ConfigError("wind: f_cap must be > 0");
  if (!(rate_cap > 0.0)) throw ConfigError("wind: rate_cap must be > 0");
  if (!(tau_decay > 0.0)) throw ConfigError("wind: tau_decay must be > 0");
}

int burst_indicator(double t, const WindCompositionParams& params) {
  const double cycle = params.t_on + params.t_off;
  return std::fmod(t, cycle) < params.t_on ? 1 : 0;
}

WindState ou_step(const WindState& ws, const OUParams& ou, double dt,
                  GaussianSource& noise) {
  WindState next = ws;
  const double sq = ou.sigma * std::sqrt(dt);
  for (int i = 0; i < 3; ++i) {
    next.g[i] = ws.g[i] + ou.theta * (ou.mu[i] - ws.g[i]) * dt + sq * noise.next();
  }
  next.t = ws.t + dt;
  return next;
}

Vec3 compose_force(double t, const WindState& ws,
                   const WindCompositionParams& comp) {
  const double w = 2.0 * M_PI * comp.freq * t;
  Vec3 fluct(comp.f_amp_x * std::sin(w) + ws.g.x(),
             comp.f_amp_y * std::sin(w + comp.phi0) + ws.g.y(),
             ws.g.z());
  if (burst_indicator(t, comp) == 0) {
    const double cycle = comp.t_on + comp.t_off;
    const double off_elapsed = std::fmod(t, cycle) - comp.t_on;
    fluct *= std::exp(-off_elapsed / comp.tau_decay);
  }
  return comp.f_mean + fluct;
}

Vec3 limit_force(const Vec3& f_raw, const Vec3& f_prev,
                 const WindCompositionParams& comp, double dt) {
  if (!(dt > 0.0)) throw DomainError("limit_force: dt must be > 0");
  Vec3 f = f_raw;
  const double mag = f.norm();
  if (mag > comp.f_cap) f *= comp.f_cap / mag;
  const Vec3 delta = f - f_prev;
  const double max_delta = comp.rate_cap * dt;
  const double dn = delta.norm();
  if (dn > max_delta) f = f_prev + delta * (max_delta / dn);
  return f;
}

Vec3 wind_accel(const Vec3& f_wind, double m) {
  if (!(m > 0.0)) throw DomainError("wind_accel: mass must be > 0");
  return f_wind / m;
}

WindProcess::WindProcess(const OUParams& ou, const WindCompositionParams& comp)
    : ou_(ou), comp_(comp), noise_(ou.seed) {
  ou_.validate();
  comp_.validate();
}

Vec3 WindProcess::advance(double dt) {
  const Vec3 f_raw = compose_force(state_.t, state_, comp_);
  const Vec3 f = limit_force(f_raw, state_.f_applied, comp_, dt);
  state_.f_applied = f;
  state_ = ou_step(state_, ou_, dt, noise_);
  return f;
}

}  // namespace asindy
