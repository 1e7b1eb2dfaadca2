#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtc/errors.hpp"

namespace dtc {

struct MetricsWindow {
  double start = 1.0;  // s
  double end = 2.0;    // s

  bool operator==(const MetricsWindow&) const = default;
};

/// RMS deviation of a series about its own mean.
inline double ripple(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("ripple: empty window");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(series.size());
  double acc = 0.0;
  for (double x : series) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(series.size()));
}

/// Sampled series restricted to `window`: ripple over samples with
/// window.start <= t < window.end.
inline double ripple(std::span<const double> times, std::span<const double> values,
                     const MetricsWindow& window) {
  std::vector<double> picked;
  for (std::size_t i = 0; i < times.size() && i < values.size(); ++i) {
    if (times[i] >= window.start && times[i] < window.end) picked.push_back(values[i]);
  }
  return ripple(picked);
}

inline double mean(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("mean: empty window");
  double acc = 0.0;
  for (double x : series) acc += x;
  return acc / static_cast<double>(series.size());
}

/// Steady-state summary of one run.
struct RippleReport {
  std::string controller;
  std::string scenario_key;  // identifies the scenario minus the controller
  MetricsWindow window;

  double torque_mean = 0.0;
  double torque_ripple_rms = 0.0;
  double speed_mean = 0.0;  // rpm
  double speed_ripple_rms = 0.0;
  double flux_mean = 0.0;
  double flux_ripple_rms = 0.0;
  std::optional<double> settling_time;  // empty if never settled
  std::int64_t switch_count = 0;

  double flux_ref_mean = 0.0;
  double flux_in_band_fraction = 0.0;  // |flux - ref| <= 2 band
  std::int64_t cycles = 0;
};

}  // namespace dtc
