#include "dtc/metrics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dtc/report.hpp"

TEST(Ripple, ConstantSeriesIsZero) {
  const std::vector<double> x(100, 3.25);
  EXPECT_EQ(dtc::ripple(x), 0.0);
}

TEST(Ripple, AlternatingUnitSeries) {
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) x.push_back(i % 2 ? -1.0 : 1.0);
  EXPECT_NEAR(dtc::ripple(x), 1.0, 1e-15);
}

TEST(Ripple, DenseSineIsAmplitudeOverRootTwo) {
  // Oracle: RMS of A sin over whole periods is A / sqrt(2) (integral of
  // sin^2 over a period is half the period).
  const double amplitude = 2.5;
  std::vector<double> x;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    x.push_back(7.0 + amplitude * std::sin(2.0 * std::numbers::pi * 13.0 * i / n));
  }
  EXPECT_NEAR(dtc::ripple(x), amplitude / std::sqrt(2.0), 1e-3 * amplitude / std::sqrt(2.0));
}

TEST(Ripple, EmptyWindowThrows) {
  EXPECT_THROW(dtc::ripple(std::vector<double>{}), std::invalid_argument);
  const std::vector<double> t{0.0, 0.1, 0.2}, v{1, 2, 3};
  EXPECT_THROW(dtc::ripple(t, v, dtc::MetricsWindow{0.5, 0.9}), std::invalid_argument);
}

TEST(Ripple, WindowSelectsHalfOpenRange) {
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0}, v{100, 1, -1, 100};
  EXPECT_NEAR(dtc::ripple(t, v, dtc::MetricsWindow{1.0, 3.0}), 1.0, 1e-15);
}

namespace {
dtc::RippleReport sample_report(const char* controller) {
  dtc::RippleReport r;
  r.controller = controller;
  r.scenario_key = "same";
  r.window = {1.0, 2.0};
  r.torque_mean = 0.1;
  r.torque_ripple_rms = 2.0;
  r.speed_mean = 1500;
  r.speed_ripple_rms = 0.3;
  r.flux_mean = 0.7;
  r.flux_ripple_rms = 0.005;
  r.settling_time = 0.25;
  r.switch_count = 1000;
  return r;
}
}  // namespace

TEST(Compare, IdenticalReportsHaveZeroDeltas) {
  const auto a = sample_report("conventional");
  const auto c = dtc::compare(a, a);
  for (const auto& row : c.rows) {
    EXPECT_EQ(row.delta_percent, 0.0) << row.metric;
    if (row.winner != dtc::Winner::kNone) {
      EXPECT_EQ(row.winner, dtc::Winner::kTie);
    }
  }
}

TEST(Compare, HalvedRippleIsMinusFiftyPercent) {
  const auto a = sample_report("conventional");
  auto b = sample_report("fuzzy");
  b.torque_ripple_rms = 1.0;
  const auto c = dtc::compare(a, b);
  EXPECT_NEAR(c.row("torque_ripple_rms").delta_percent, -50.0, 1e-12);
  EXPECT_EQ(c.row("torque_ripple_rms").winner, dtc::Winner::kCandidate);
  EXPECT_EQ(c.row("torque_mean").winner, dtc::Winner::kNone);
  EXPECT_NE(dtc::format_comparison(c).find("fuzzy"), std::string::npos);
}

TEST(Compare, MismatchedWindowsOrScenariosThrow) {
  const auto a = sample_report("conventional");
  auto b = sample_report("fuzzy");
  b.window = {0.5, 2.0};
  EXPECT_THROW(dtc::compare(a, b), std::invalid_argument);
  b = sample_report("fuzzy");
  b.scenario_key = "other";
  EXPECT_THROW(dtc::compare(a, b), std::invalid_argument);
}

TEST(Compare, NeverSettledLoses) {
  const auto a = sample_report("conventional");
  auto b = sample_report("fuzzy");
  b.settling_time.reset();
  const auto c = dtc::compare(a, b);
  EXPECT_EQ(c.row("settling_time").winner, dtc::Winner::kBaseline);
  EXPECT_TRUE(dtc::to_json(c)["metrics"][6]["candidate"].is_null());
}
