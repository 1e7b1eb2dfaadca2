#pragma once

#include <cmath>
#include <string>

#include "dtc/errors.hpp"
#include "dtc/frames.hpp"

namespace dtc {

/// Induction machine parameters. Only `rs` and `pole_pairs` (and the rated
/// plate values) come from the reference machine; the rotor-side values,
/// inductances and inertia are typical catalog figures for a 7.5 kW,
/// 400 V, 50 Hz, 4-pole motor.
struct MachineParams {
  double rs = 0.7334;        // ohm
  double rr = 0.7402;        // ohm
  double ls = 0.1271;        // H
  double lr = 0.1271;        // H
  double lm = 0.1241;        // H
  int pole_pairs = 2;
  double inertia = 0.0343;   // kg m^2
  double friction = 0.000503;  // N m s / rad
  double rated_power = 7500.0;
  double rated_voltage = 400.0;
  double rated_frequency = 50.0;
  double rated_speed = 1440.0;  // rpm

  double sigma() const { return 1.0 - lm * lm / (ls * lr); }
  double rotor_time_constant() const { return lr / rr; }

  /// Throws ConfigError if the invariants do not hold.
  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("machine: " + m); };
    if (!(rs >= 0.0) || !(rr >= 0.0)) fail("resistances must be >= 0");
    if (!(ls > 0.0) || !(lr > 0.0) || !(lm > 0.0)) fail("inductances must be > 0");
    if (!(lm * lm < ls * lr)) fail("lm^2 must be < ls*lr");
    if (pole_pairs < 1) fail("pole_pairs must be >= 1");
    if (!(inertia > 0.0)) fail("inertia must be > 0");
    if (!(friction >= 0.0)) fail("friction must be >= 0");
  }
};

/// Plant state in the stationary frame.
struct MachineState {
  double is_alpha = 0.0;
  double is_beta = 0.0;
  double lr_alpha = 0.0;
  double lr_beta = 0.0;
  double omega_m = 0.0;  // rad/s, mechanical

  friend MachineState operator+(const MachineState& x, const MachineState& y) {
    return {x.is_alpha + y.is_alpha, x.is_beta + y.is_beta,
            x.lr_alpha + y.lr_alpha, x.lr_beta + y.lr_beta,
            x.omega_m + y.omega_m};
  }
  friend MachineState operator*(double k, const MachineState& x) {
    return {k * x.is_alpha, k * x.is_beta, k * x.lr_alpha, k * x.lr_beta,
            k * x.omega_m};
  }
  bool operator==(const MachineState&) const = default;
};

inline double true_torque(const MachineParams& p, const MachineState& s) {
  return 1.5 * p.pole_pairs * (p.lm / p.lr) *
         (s.lr_alpha * s.is_beta - s.lr_beta * s.is_alpha);
}

inline AlphaBeta true_stator_flux(const MachineParams& p, const MachineState& s) {
  const double sigma_ls = p.sigma() * p.ls;
  const double kr = p.lm / p.lr;
  return {sigma_ls * s.is_alpha + kr * s.lr_alpha,
          sigma_ls * s.is_beta + kr * s.lr_beta, 0.0};
}

/// Fifth-order stationary-frame model:
///   dlr/dt = (lm/tr) is - lr/tr + J(wr) lr
///   dis/dt = (v - rs is - (lm/lr) dlr/dt) / (sigma ls)
///   J dw/dt = Te - Tload - B w
inline MachineState derivatives(const MachineParams& p, const MachineState& s,
                                const AlphaBeta& v, double load_torque) {
  const double tr = p.rotor_time_constant();
  const double omega_r = p.pole_pairs * s.omega_m;
  const double sigma_ls = p.sigma() * p.ls;
  const double kr = p.lm / p.lr;

  MachineState d;
  d.lr_alpha = (p.lm / tr) * s.is_alpha - s.lr_alpha / tr - omega_r * s.lr_beta;
  d.lr_beta = (p.lm / tr) * s.is_beta - s.lr_beta / tr + omega_r * s.lr_alpha;
  d.is_alpha = (v.alpha - p.rs * s.is_alpha - kr * d.lr_alpha) / sigma_ls;
  d.is_beta = (v.beta - p.rs * s.is_beta - kr * d.lr_beta) / sigma_ls;
  d.omega_m = (true_torque(p, s) - load_torque - p.friction * s.omega_m) / p.inertia;
  return d;
}

/// One classical RK4 step with the voltage held constant over the step.
/// Throws DivergenceError if any state magnitude exceeds `blowup_bound`
/// or becomes non-finite.
inline MachineState step(const MachineParams& p, const MachineState& s,
                         const AlphaBeta& v, double load_torque, double dt,
                         double blowup_bound = 1e6) {
  if (!(dt > 0.0)) throw ConfigError("machine step: dt must be > 0");
  const MachineState k1 = derivatives(p, s, v, load_torque);
  const MachineState k2 = derivatives(p, s + (0.5 * dt) * k1, v, load_torque);
  const MachineState k3 = derivatives(p, s + (0.5 * dt) * k2, v, load_torque);
  const MachineState k4 = derivatives(p, s + dt * k3, v, load_torque);
  const MachineState next =
      s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  for (double x : {next.is_alpha, next.is_beta, next.lr_alpha, next.lr_beta,
                   next.omega_m}) {
    if (!std::isfinite(x) || std::abs(x) > blowup_bound) {
      throw DivergenceError("machine state diverged (|x| = " +
                            std::to_string(x) + ")");
    }
  }
  return next;
}

}  // namespace dtc
