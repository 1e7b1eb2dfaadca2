#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtc/errors.hpp"
#include "dtc/metrics.hpp"

namespace dtc {

enum class Winner { kNone, kBaseline, kCandidate, kTie };

struct MetricDelta {
  std::string metric;
  std::string unit;
  double baseline = 0.0;
  double candidate = 0.0;
  double delta_percent = 0.0;  // (candidate - baseline) / |baseline| * 100
  Winner winner = Winner::kNone;
};

struct Comparison {
  std::string baseline_label;
  std::string candidate_label;
  std::vector<MetricDelta> rows;

  const MetricDelta& row(const std::string& metric) const {
    for (const auto& r : rows) {
      if (r.metric == metric) return r;
    }
    throw std::out_of_range("no metric " + metric);
  }
};

inline double percent_delta(double baseline, double candidate) {
  if (baseline == candidate) return 0.0;
  if (baseline == 0.0) {
    return std::copysign(std::numeric_limits<double>::infinity(), candidate);
  }
  return (candidate - baseline) / std::abs(baseline) * 100.0;
}

/// Side-by-side comparison of two runs of the same scenario. For ripple,
/// settling time and switch count lower wins; means are reported without a
/// winner. Throws std::invalid_argument if the runs are not comparable.
inline Comparison compare(const RippleReport& baseline, const RippleReport& candidate) {
  if (!(baseline.window == candidate.window)) {
    throw std::invalid_argument("compare: metrics windows differ");
  }
  if (baseline.scenario_key != candidate.scenario_key) {
    throw std::invalid_argument("compare: reports come from different scenarios");
  }

  Comparison c;
  c.baseline_label = baseline.controller;
  c.candidate_label = candidate.controller;
  auto add = [&](const char* metric, const char* unit, double a, double b,
                 bool lower_wins) {
    MetricDelta d{metric, unit, a, b, percent_delta(a, b), Winner::kNone};
    if (lower_wins) {
      d.winner = a == b ? Winner::kTie : (b < a ? Winner::kCandidate : Winner::kBaseline);
    }
    c.rows.push_back(d);
  };
  const double never = std::numeric_limits<double>::infinity();
  add("torque_mean", "N.m", baseline.torque_mean, candidate.torque_mean, false);
  add("torque_ripple_rms", "N.m", baseline.torque_ripple_rms, candidate.torque_ripple_rms, true);
  add("speed_mean", "rpm", baseline.speed_mean, candidate.speed_mean, false);
  add("speed_ripple_rms", "rpm", baseline.speed_ripple_rms, candidate.speed_ripple_rms, true);
  add("flux_mean", "Wb", baseline.flux_mean, candidate.flux_mean, false);
  add("flux_ripple_rms", "Wb", baseline.flux_ripple_rms, candidate.flux_ripple_rms, true);
  add("settling_time", "s", baseline.settling_time.value_or(never),
      candidate.settling_time.value_or(never), true);
  add("switch_count", "", static_cast<double>(baseline.switch_count),
      static_cast<double>(candidate.switch_count), true);
  return c;
}

inline std::string format_comparison(const Comparison& c) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %-5s %14s %14s %10s  %s\n", "metric", "unit",
                c.baseline_label.c_str(), c.candidate_label.c_str(), "delta", "winner");
  out += line;
  for (const auto& r : c.rows) {
    const char* winner = "-";
    if (r.winner == Winner::kBaseline) winner = c.baseline_label.c_str();
    if (r.winner == Winner::kCandidate) winner = c.candidate_label.c_str();
    if (r.winner == Winner::kTie) winner = "tie";
    std::snprintf(line, sizeof line, "%-18s %-5s %14.6g %14.6g %+9.2f%%  %s\n",
                  r.metric.c_str(), r.unit.c_str(), r.baseline, r.candidate,
                  r.delta_percent, winner);
    out += line;
  }
  return out;
}

inline nlohmann::json to_json(const RippleReport& r) {
  nlohmann::json j;
  j["controller"] = r.controller;
  j["metrics_window"] = {{"start", r.window.start}, {"end", r.window.end}};
  j["cycles"] = r.cycles;
  j["torque_mean"] = r.torque_mean;
  j["torque_ripple_rms"] = r.torque_ripple_rms;
  j["speed_mean"] = r.speed_mean;
  j["speed_ripple_rms"] = r.speed_ripple_rms;
  j["flux_mean"] = r.flux_mean;
  j["flux_ripple_rms"] = r.flux_ripple_rms;
  j["flux_ref_mean"] = r.flux_ref_mean;
  j["flux_in_band_fraction"] = r.flux_in_band_fraction;
  j["settling_time"] = r.settling_time ? nlohmann::json(*r.settling_time) : nlohmann::json();
  j["switch_count"] = r.switch_count;
  return j;
}

inline nlohmann::json to_json(const Comparison& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : c.rows) {
    const char* winner = "none";
    if (r.winner == Winner::kBaseline) winner = "baseline";
    if (r.winner == Winner::kCandidate) winner = "candidate";
    if (r.winner == Winner::kTie) winner = "tie";
    nlohmann::json row = {{"metric", r.metric}, {"unit", r.unit}, {"winner", winner}};
    auto num = [](double x) {
      return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json();
    };
    row["baseline"] = num(r.baseline);
    row["candidate"] = num(r.candidate);
    row["delta_percent"] = num(r.delta_percent);
    rows.push_back(row);
  }
  return {{"baseline", c.baseline_label}, {"candidate", c.candidate_label}, {"metrics", rows}};
}

}  // namespace dtc
