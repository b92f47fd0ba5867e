#pragma once

#include <cstdint>

#include "rng.hpp"
#include "types.hpp"

namespace asindy {

// Ornstein-Uhlenbeck gust parameters (Euler-discretized).
struct OUParams {
  Vec3 mu = Vec3::Zero();  // mean drift [N]
  double theta = 1.5;      // mean-reversion rate [1/s]
  double sigma = 0.01;     // gust intensity [N/sqrt(s)]
  std::uint64_t seed = 0;

  void validate() const;
};

// Burst schedule, sinusoid composition, and force limits.
struct WindCompositionParams {
  Vec3 f_mean{0.02, 0.01, 0.0};  // mean force [N]
  double f_amp_x = 0.015;        // sinusoid amplitude, x [N]
  double f_amp_y = 0.015;        // sinusoid amplitude, y [N]
  double freq = 0.1;             // sinusoid frequency [Hz]
  double phi0 = M_PI / 2.0;      // y-axis phase offset [rad]
  double t_on = 4.0;             // burst on duration [s]
  double t_off = 2.0;            // burst off duration [s]
  double f_cap = 0.08;           // magnitude limit [N]
  double rate_cap = 0.5;         // rate-of-change limit [N/s]
  double tau_decay = 0.3;        // off-window decay toward the mean [s]

  void validate() const;
};

struct WindState {
  Vec3 g = Vec3::Zero();          // current OU value [N]
  Vec3 f_applied = Vec3::Zero();  // last applied (limited) force [N]
  double t = 0.0;
};

// 1 while (t mod (t_on + t_off)) < t_on, else 0.
int burst_indicator(double t, const WindCompositionParams& params);

// One Euler step of dg = theta*(mu - g)dt + sigma*dW. Draws exactly three
// normals from `noise` (x, y, z order), so realizations are a pure function
// of the seed and the step sequence.
WindState ou_step(const WindState& ws, const OUParams& ou, double dt,
                  GaussianSource& noise);

// Raw force: per-axis mean + sinusoid (x, y only) + OU term. Outside a burst
// the stochastic and sinusoid contributions decay exponentially toward the
// mean with time constant tau_decay.
Vec3 compose_force(double t, const WindState& ws,
                   const WindCompositionParams& comp);

// Magnitude clamp to f_cap, then rate clamp against f_prev. Both bounds hold
// on the output; inputs already inside both limits pass through unchanged.
Vec3 limit_force(const Vec3& f_raw, const Vec3& f_prev,
                 const WindCompositionParams& comp, double dt);

// Equivalent wind acceleration f/m, logged for interpretation only.
Vec3 wind_accel(const Vec3& f_wind, double m);

// Bundles the OU state and its noise source for one run. advance() performs
// the full per-step pipeline: OU step, composition, limiting.
class WindProcess {
 public:
  WindProcess(const OUParams& ou, const WindCompositionParams& comp);

  // Advance to the state's next step and return the applied force.
  Vec3 advance(double dt);

  const WindState& state() const { return state_; }

 private:
  OUParams ou_;
  WindCompositionParams comp_;
  WindState state_;
  GaussianSource noise_;
};

}  // namespace asindy
