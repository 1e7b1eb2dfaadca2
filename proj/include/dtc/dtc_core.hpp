#pragma once

#include <algorithm>
#include <utility>

#include "dtc/errors.hpp"
#include "dtc/inverter.hpp"

namespace dtc {

struct HysteresisState {
  int flux_flag = 1;    // 1 = increase flux, 0 = decrease
  int torque_flag = 0;  // +1, 0, -1
  double flux_band = 0.0105;  // Wb
  double torque_band = 0.5;   // N m
};

/// Two-level flux comparator with memory inside the band.
inline HysteresisState flux_comparator(HysteresisState h, double flux_ref,
                                       double flux_est) {
  const double error = flux_ref - flux_est;
  if (error > h.flux_band) {
    h.flux_flag = 1;
  } else if (error < -h.flux_band) {
    h.flux_flag = 0;
  }
  return h;
}

/// Three-level torque comparator; returns to 0 inside the band.
inline HysteresisState torque_comparator(HysteresisState h, double torque_ref,
                                         double torque_est) {
  const double error = torque_ref - torque_est;
  if (error > h.torque_band) {
    h.torque_flag = 1;
  } else if (error < -h.torque_band) {
    h.torque_flag = -1;
  } else {
    h.torque_flag = 0;
  }
  return h;
}

/// Six-sector switching table. For sector N:
///
///   flux  torque   vector
///    1     +1      V(N+1)
///    1     -1      V(N-1)
///    0     +1      V(N+2)
///    0     -1      V(N-2)
///    *      0      V0 or V7, whichever needs fewer leg transitions from
///                  `previous` (V0 on ties)
inline SwitchingState select_vector(int flux_flag, int torque_flag, int sector,
                                    const SwitchingState& previous = kV0) {
  if (sector < 1 || sector > 6) throw ConfigError("switching table: sector out of range");
  if (torque_flag == 0) {
    return transitions(previous, kV7) < transitions(previous, kV0) ? kV7 : kV0;
  }
  const int step = (flux_flag ? 1 : 2) * (torque_flag > 0 ? 1 : -1);
  return active_vector(sector + step);
}

/// Outer speed loop. `integral` accumulates speed error (rad), so the output
/// is kp * e + ki * integral, clamped to +/- torque_limit.
struct SpeedPi {
  double kp = 2.0;
  double ki = 20.0;
  double integral = 0.0;
  double torque_limit = 50.0;
};

/// Conditional integration: the integrator only moves when the output is
/// unsaturated or the error would pull it back inside the limit.
inline std::pair<SpeedPi, double> speed_pi_step(SpeedPi pi, double speed_ref,
                                                double speed, double dt) {
  if (!(dt > 0.0)) throw ConfigError("speed pi: dt must be > 0");
  const double error = speed_ref - speed;
  const double candidate_integral = pi.integral + error * dt;
  const double unclamped = pi.kp * error + pi.ki * candidate_integral;
  const double out = std::clamp(unclamped, -pi.torque_limit, pi.torque_limit);
  const bool saturated_high = unclamped > pi.torque_limit && error > 0.0;
  const bool saturated_low = unclamped < -pi.torque_limit && error < 0.0;
  if (!saturated_high && !saturated_low) {
    pi.integral = candidate_integral;
    return {pi, out};
  }
  return {pi, std::clamp(pi.kp * error + pi.ki * pi.integral, -pi.torque_limit,
                         pi.torque_limit)};
}

}  // namespace dtc
