#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dtc/dtc_core.hpp"
#include "dtc/errors.hpp"
#include "dtc/estimator.hpp"
#include "dtc/frames.hpp"
#include "dtc/fuzzy_optimizer.hpp"
#include "dtc/inverter.hpp"
#include "dtc/machine.hpp"
#include "dtc/metrics.hpp"

namespace dtc {

enum class Controller { kConventional, kFuzzy };
enum class ReferenceMode { kSpeed, kTorque };

inline std::string to_string(Controller c) {
  return c == Controller::kFuzzy ? "fuzzy" : "conventional";
}
inline std::string to_string(ReferenceMode m) {
  return m == ReferenceMode::kTorque ? "torque" : "speed";
}

struct LoadStep {
  double time = 0.0;    // s
  double torque = 0.0;  // N m
};

struct ControlConfig {
  double flux_ref = 0.7;      // Wb, conventional reference and fuzzy ceiling
  double flux_band = 0.0;     // Wb; <= 0 means 1.5 % of flux_ref
  double torque_band = 0.0;   // N m; <= 0 means 1 % of rated torque
  SpeedPi speed_pi{};
};

struct Scenario {
  std::string name = "scenario";
  Controller controller = Controller::kConventional;
  double duration = 2.0;  // s
  double dt = 50e-6;      // s
  double vdc = 400.0;     // V
  ReferenceMode mode = ReferenceMode::kSpeed;
  double speed_ref_rpm = 1500.0;
  double torque_ref = 0.0;  // N m, direct torque mode only
  std::vector<LoadStep> load_profile{{0.0, 0.0}};
  MachineParams machine{};
  ControlConfig control{};
  fuzzy::FuzzyConfig fuzzy{};
  int fuzzy_update_divisor = 1;
  std::optional<double> estimator_rs;  // defaults to machine.rs
  MetricsWindow window{};
  std::string output;  // telemetry CSV path, empty for none
  double blowup_bound = 1e6;

  double rated_torque() const {
    return machine.rated_power / (machine.rated_speed * 2.0 * std::numbers::pi / 60.0);
  }
  double flux_band() const {
    return control.flux_band > 0.0 ? control.flux_band : 0.015 * control.flux_ref;
  }
  double torque_band() const {
    return control.torque_band > 0.0 ? control.torque_band : 0.01 * rated_torque();
  }
  std::int64_t cycles() const {
    return static_cast<std::int64_t>(std::ceil(duration / dt - 1e-9));
  }
  double load_at(double t) const {
    double torque = 0.0;
    for (const auto& s : load_profile) {
      if (s.time <= t) torque = s.torque;
    }
    return torque;
  }

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("scenario: " + m); };
    if (!(duration > 0.0)) fail("duration must be > 0");
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (!(vdc > 0.0)) fail("vdc must be > 0");
    if (!(window.start >= 0.0) || !(window.end > window.start) ||
        window.end > duration + 1e-12) {
      fail("metrics window must satisfy 0 <= start < end <= duration");
    }
    for (std::size_t i = 1; i < load_profile.size(); ++i) {
      if (load_profile[i].time < load_profile[i - 1].time) {
        fail("load profile times must be non-decreasing");
      }
    }
    if (!(control.flux_ref > 0.0)) fail("control.flux_ref must be > 0");
    if (!(control.speed_pi.torque_limit > 0.0)) fail("speed_pi.torque_limit must be > 0");
    if (fuzzy_update_divisor < 1) fail("fuzzy update divisor must be >= 1");
    if (estimator_rs && !(*estimator_rs >= 0.0)) fail("estimator rs must be >= 0");
    machine.validate();
    if (controller == Controller::kFuzzy) fuzzy.validate();
  }
};

/// One control cycle of telemetry.
struct TelemetryRow {
  double t = 0.0;
  ThreePhase i_abc;
  AlphaBeta i_ab;
  double flux_alpha = 0.0;
  double flux_beta = 0.0;
  double flux_mag = 0.0;
  double flux_ref = 0.0;
  int sector = 1;
  double torque_est = 0.0;
  double torque_ref = 0.0;
  double torque_true = 0.0;
  double speed_rpm = 0.0;
  double speed_ref_rpm = 0.0;
  int flux_flag = 0;
  int torque_flag = 0;
  SwitchingState sw;
  // Not written to CSV; kept for replay checks.
  AlphaBeta v_applied;
  double load_torque = 0.0;
};

inline constexpr const char* kTelemetryHeader =
    "t,ia,ib,ic,i_alpha,i_beta,flux_alpha,flux_beta,flux_mag,flux_ref,sector,"
    "torque_est,torque_ref,torque_true,speed_rpm,speed_ref_rpm,flux_flag,"
    "torque_flag,sa,sb,sc";

/// CSV line (no newline), reals at 9 significant digits.
inline std::string format_row(const TelemetryRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.9g,%.9g,"
                "%.9g,%.9g,%.9g,%d,%d,%d,%d,%d",
                r.t, r.i_abc.a, r.i_abc.b, r.i_abc.c, r.i_ab.alpha, r.i_ab.beta,
                r.flux_alpha, r.flux_beta, r.flux_mag, r.flux_ref, r.sector,
                r.torque_est, r.torque_ref, r.torque_true, r.speed_rpm,
                r.speed_ref_rpm, r.flux_flag, r.torque_flag, r.sw.sa, r.sw.sb,
                r.sw.sc);
  return buf;
}

using TelemetrySink = std::function<void(const TelemetryRow&)>;

inline double rpm_to_rad(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }
inline double rad_to_rpm(double w) { return w * 60.0 / (2.0 * std::numbers::pi); }

/// Scenario identity without the controller and output fields, used to
/// check that two reports are comparable.
inline std::string scenario_key(const Scenario& sc) {
  std::string key;
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g|", x);
    key += buf;
  };
  key += sc.name + "|" + to_string(sc.mode) + "|";
  for (double x : {sc.duration, sc.dt, sc.vdc, sc.speed_ref_rpm, sc.torque_ref,
                   sc.window.start, sc.window.end, sc.blowup_bound}) {
    put(x);
  }
  for (const auto& s : sc.load_profile) {
    put(s.time);
    put(s.torque);
  }
  const MachineParams& m = sc.machine;
  for (double x : {m.rs, m.rr, m.ls, m.lr, m.lm, static_cast<double>(m.pole_pairs),
                   m.inertia, m.friction, m.rated_power, m.rated_speed}) {
    put(x);
  }
  const ControlConfig& c = sc.control;
  for (double x : {c.flux_ref, sc.flux_band(), sc.torque_band(), c.speed_pi.kp,
                   c.speed_pi.ki, c.speed_pi.torque_limit,
                   sc.estimator_rs.value_or(m.rs)}) {
    put(x);
  }
  return key;
}

/// Closed-loop controller state carried between cycles.
struct Drive {
  MachineState plant{};
  EstimatorState estimator{};
  HysteresisState hysteresis{};
  SpeedPi speed_pi{};
  fuzzy::FuzzyState optimizer{};
  SwitchingState switching = kV0;
  AlphaBeta v_prev{};
  AlphaBeta i_prev{};
  std::int64_t cycle = 0;
};

inline Drive make_drive(const Scenario& sc) {
  Drive d;
  d.estimator.rs = sc.estimator_rs.value_or(sc.machine.rs);
  d.estimator = with_flux(d.estimator, true_stator_flux(sc.machine, d.plant));
  d.hysteresis.flux_band = sc.flux_band();
  d.hysteresis.torque_band = sc.torque_band();
  d.speed_pi = sc.control.speed_pi;
  d.optimizer.flux_ref = sc.controller == Controller::kFuzzy ? sc.fuzzy.flux_rated
                                                             : sc.control.flux_ref;
  return d;
}

/// Advances the drive by one control cycle and returns its telemetry row.
/// Everything applied to the plant during the cycle is computed from the
/// measurements taken at its start.
inline TelemetryRow advance(const Scenario& sc, Drive& d) {
  const MachineParams& mp = sc.machine;
  const double dt = sc.dt;
  TelemetryRow row;
  row.t = static_cast<double>(d.cycle) * dt;

  // Measurement.
  row.i_abc = inverse_clarke(AlphaBeta{d.plant.is_alpha, d.plant.is_beta, 0.0});
  row.i_ab = clarke(row.i_abc);
  const AlphaBeta i_now{row.i_ab.alpha, row.i_ab.beta, 0.0};
  const double speed = d.plant.omega_m;

  // Estimation: integrate over the previous cycle.
  if (d.cycle > 0) d.estimator = update_flux(d.estimator, d.v_prev, d.i_prev, dt);
  d.estimator = update_torque(d.estimator, i_now, mp.pole_pairs);
  const FluxEstimate& flux = d.estimator.flux;

  // References.
  double torque_ref = sc.torque_ref;
  if (sc.mode == ReferenceMode::kSpeed) {
    auto [pi, out] = speed_pi_step(d.speed_pi, rpm_to_rad(sc.speed_ref_rpm), speed, dt);
    d.speed_pi = pi;
    torque_ref = out;
  }
  const double flux_ref = d.optimizer.flux_ref;

  // Control law.
  d.hysteresis = flux_comparator(d.hysteresis, flux_ref, flux.magnitude);
  d.hysteresis = torque_comparator(d.hysteresis, torque_ref, d.estimator.torque_estimate);
  d.switching = select_vector(d.hysteresis.flux_flag, d.hysteresis.torque_flag,
                              flux.sector, d.switching);
  const AlphaBeta v = stator_voltage(d.switching, sc.vdc);

  row.flux_alpha = flux.lambda_alpha;
  row.flux_beta = flux.lambda_beta;
  row.flux_mag = flux.magnitude;
  row.flux_ref = flux_ref;
  row.sector = flux.sector;
  row.torque_est = d.estimator.torque_estimate;
  row.torque_ref = torque_ref;
  row.torque_true = true_torque(mp, d.plant);
  row.speed_rpm = rad_to_rpm(speed);
  row.speed_ref_rpm = sc.mode == ReferenceMode::kSpeed ? sc.speed_ref_rpm : 0.0;
  row.flux_flag = d.hysteresis.flux_flag;
  row.torque_flag = d.hysteresis.torque_flag;
  row.sw = d.switching;
  row.v_applied = v;
  row.load_torque = sc.load_at(row.t);

  // Flux reference for the next cycle.
  if (sc.controller == Controller::kFuzzy && d.cycle % sc.fuzzy_update_divisor == 0) {
    d.optimizer = fuzzy::update_flux_ref(d.optimizer, sc.fuzzy,
                                         torque_ref - d.estimator.torque_estimate, dt);
  }

  // Plant.
  try {
    d.plant = step(mp, d.plant, v, row.load_torque, dt, sc.blowup_bound);
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string(e.what()) + " at cycle " + std::to_string(d.cycle),
                          d.cycle);
  }
  d.v_prev = v;
  d.i_prev = i_now;
  ++d.cycle;
  return row;
}


/// Runs the scenario to completion, streaming each row to `sink` (if any).
inline RippleReport run(const Scenario& sc, const TelemetrySink& sink = {}) {
  sc.validate();
  Drive d = make_drive(sc);
  const std::int64_t n = sc.cycles();
  const double band = sc.flux_band();
  const double speed_tol = 0.01 * std::abs(sc.speed_ref_rpm);

  std::vector<double> torque, speed, flux, flux_ref;
  std::int64_t in_band = 0;
  std::int64_t switches = 0;
  SwitchingState last = d.switching;
  std::optional<double> settled_since;

  for (std::int64_t k = 0; k < n; ++k) {
    const SwitchingState before = last;
    const TelemetryRow row = advance(sc, d);
    last = row.sw;
    if (sink) sink(row);

    if (sc.mode == ReferenceMode::kSpeed) {
      if (std::abs(row.speed_rpm - sc.speed_ref_rpm) <= speed_tol) {
        if (!settled_since) settled_since = row.t;
      } else {
        settled_since.reset();
      }
    }
    if (row.t >= sc.window.start && row.t < sc.window.end) {
      torque.push_back(row.torque_true);
      speed.push_back(row.speed_rpm);
      flux.push_back(row.flux_mag);
      flux_ref.push_back(row.flux_ref);
      if (std::abs(row.flux_mag - row.flux_ref) <= 2.0 * band) ++in_band;
      switches += transitions(before, row.sw);
    }
  }

  RippleReport r;
  r.controller = to_string(sc.controller);
  r.scenario_key = scenario_key(sc);
  r.window = sc.window;
  r.cycles = n;
  r.torque_mean = mean(torque);
  r.torque_ripple_rms = ripple(torque);
  r.speed_mean = mean(speed);
  r.speed_ripple_rms = ripple(speed);
  r.flux_mean = mean(flux);
  r.flux_ripple_rms = ripple(flux);
  r.flux_ref_mean = mean(flux_ref);
  r.flux_in_band_fraction = static_cast<double>(in_band) / static_cast<double>(flux.size());
  r.switch_count = switches;
  r.settling_time = settled_since;
  return r;
}

/// Runs the scenario and writes CSV telemetry (header plus one row per cycle).
inline RippleReport run(const Scenario& sc, std::ostream& csv) {
  csv << kTelemetryHeader << '\n';
  return run(sc, [&](const TelemetryRow& r) { csv << format_row(r) << '\n'; });
}

}  // namespace dtc
