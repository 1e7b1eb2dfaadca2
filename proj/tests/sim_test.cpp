#include "dtc/sim.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

using dtc::Controller;
using dtc::Scenario;
using dtc::TelemetryRow;

namespace {

Scenario short_scenario(Controller c, double duration = 0.05) {
  Scenario sc;
  sc.controller = c;
  sc.duration = duration;
  sc.window = {0.0, duration};
  return sc;
}

std::vector<TelemetryRow> collect(const Scenario& sc) {
  std::vector<TelemetryRow> rows;
  dtc::run(sc, [&](const TelemetryRow& r) { rows.push_back(r); });
  return rows;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST(Run, OneMillisecondIsTwentyCycles) {
  Scenario sc = short_scenario(Controller::kConventional, 0.001);
  std::ostringstream csv;
  const auto report = dtc::run(sc, csv);
  EXPECT_EQ(report.cycles, 20);
  std::istringstream in(csv.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 21);
}

TEST(Run, TelemetryRowsAreComplete) {
  Scenario sc = short_scenario(Controller::kFuzzy, 0.01);
  std::ostringstream csv;
  dtc::run(sc, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, dtc::kTelemetryHeader);
  const std::size_t columns = split(line).size();
  EXPECT_EQ(columns, 21u);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line);
    ASSERT_EQ(cells.size(), columns) << line;
    for (const auto& c : cells) {
      ASSERT_FALSE(c.empty());
      ASSERT_EQ(c.find("nan"), std::string::npos) << line;
      ASSERT_EQ(c.find("inf"), std::string::npos) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 200);
}

TEST(Run, IdenticalScenariosGiveIdenticalBytes) {
  for (Controller c : {Controller::kConventional, Controller::kFuzzy}) {
    const Scenario sc = short_scenario(c, 0.1);
    std::ostringstream a, b;
    dtc::run(sc, a);
    dtc::run(sc, b);
    EXPECT_EQ(a.str(), b.str());
  }
}

// Rebuild the plant trajectory from the recorded applied voltages, and
// rebuild the switching decisions from the recorded measurements with fresh
// controller parts. Both must agree with the run exactly.
TEST(Run, LockstepReplay) {
  const Scenario sc = short_scenario(Controller::kFuzzy, 0.05);
  const auto rows = collect(sc);

  dtc::MachineState plant;
  dtc::EstimatorState est;
  est.rs = sc.machine.rs;
  dtc::HysteresisState hyst;
  hyst.flux_band = sc.flux_band();
  hyst.torque_band = sc.torque_band();
  dtc::SwitchingState previous = dtc::kV0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    ASSERT_EQ(r.i_ab.alpha, dtc::clarke(dtc::inverse_clarke(
                                dtc::AlphaBeta{plant.is_alpha, plant.is_beta, 0})).alpha);
    ASSERT_EQ(r.speed_rpm, dtc::rad_to_rpm(plant.omega_m));

    if (k > 0) {
      est = dtc::update_flux(est, rows[k - 1].v_applied,
                             dtc::AlphaBeta{rows[k - 1].i_ab.alpha, rows[k - 1].i_ab.beta, 0},
                             sc.dt);
    }
    est = dtc::update_torque(est, dtc::AlphaBeta{r.i_ab.alpha, r.i_ab.beta, 0},
                             sc.machine.pole_pairs);
    ASSERT_EQ(est.flux.magnitude, r.flux_mag);
    ASSERT_EQ(est.torque_estimate, r.torque_est);
    hyst = dtc::flux_comparator(hyst, r.flux_ref, est.flux.magnitude);
    hyst = dtc::torque_comparator(hyst, r.torque_ref, est.torque_estimate);
    const auto sw = dtc::select_vector(hyst.flux_flag, hyst.torque_flag, est.flux.sector, previous);
    ASSERT_EQ(sw, r.sw) << "cycle " << k;
    ASSERT_EQ(dtc::stator_voltage(sw, sc.vdc).alpha, r.v_applied.alpha);
    previous = sw;

    plant = dtc::step(sc.machine, plant, r.v_applied, r.load_torque, sc.dt);
  }
}

TEST(Run, FuzzyUpdateDivisorHoldsReference) {
  Scenario sc = short_scenario(Controller::kFuzzy, 0.3);
  sc.fuzzy_update_divisor = 4;
  const auto rows = collect(sc);
  int changes = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].flux_ref != rows[k - 1].flux_ref) {
      ++changes;
      EXPECT_EQ((k - 1) % 4, 0u) << k;
    }
  }
  EXPECT_GT(changes, 0);
}

TEST(Run, ConventionalHoldsRatedReference) {
  const auto rows = collect(short_scenario(Controller::kConventional, 0.05));
  for (const auto& r : rows) ASSERT_EQ(r.flux_ref, Scenario{}.control.flux_ref);
}

TEST(Run, DirectTorqueMode) {
  Scenario sc = short_scenario(Controller::kConventional, 0.2);
  sc.mode = dtc::ReferenceMode::kTorque;
  sc.torque_ref = 10.0;
  sc.window = {0.1, 0.2};
  const auto report = dtc::run(sc);
  EXPECT_NEAR(report.torque_mean, 10.0, 1.5);
  EXPECT_FALSE(report.settling_time.has_value());
}

TEST(Run, DivergenceNamesTheCycle) {
  Scenario sc = short_scenario(Controller::kConventional, 0.05);
  sc.blowup_bound = 5.0;  // currents exceed 5 A within a few cycles
  try {
    dtc::run(sc);
    FAIL() << "expected divergence";
  } catch (const dtc::DivergenceError& e) {
    EXPECT_GE(e.cycle(), 0);
    EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
  }
}

TEST(Run, InvalidScenarioRejected) {
  Scenario sc;
  sc.window = {1.5, 3.0};
  EXPECT_THROW(dtc::run(sc), dtc::ConfigError);
  sc = {};
  sc.dt = 0.0;
  EXPECT_THROW(dtc::run(sc), dtc::ConfigError);
}

TEST(Run, ConventionalNoLoadSteadyState) {
  const Scenario sc;  // 2 s, 1500 rpm, no load
  const auto r = dtc::run(sc);
  EXPECT_NEAR(r.speed_mean, 1500.0, 15.0);
  EXPECT_NEAR(r.flux_mean, sc.control.flux_ref, 2.0 * sc.flux_band());
  EXPECT_GE(r.flux_in_band_fraction, 0.99);
}

TEST(Estimator, ClosedLoopDriftWithinTwoPercent) {
  Scenario sc;
  sc.duration = 1.0;
  sc.window = {0.0, 1.0};
  dtc::Drive d = dtc::make_drive(sc);
  double worst = 0.0;
  for (std::int64_t k = 0; k < sc.cycles(); ++k) {
    const dtc::AlphaBeta truth = dtc::true_stator_flux(sc.machine, d.plant);
    dtc::advance(sc, d);
    // The estimate at the start of cycle k (after its update) targets the
    // plant state at the start of cycle k.
    const double err = std::hypot(d.estimator.flux.lambda_alpha - truth.alpha,
                                  d.estimator.flux.lambda_beta - truth.beta);
    worst = std::max(worst, err);
  }
  EXPECT_LE(worst, 0.02 * sc.control.flux_ref);
}

TEST(Estimator, ResistanceMismatchKnob) {
  Scenario sc = short_scenario(Controller::kConventional, 0.5);
  sc.window = {0.25, 0.5};
  sc.estimator_rs = 1.2 * sc.machine.rs;
  dtc::Drive d = dtc::make_drive(sc);
  EXPECT_EQ(d.estimator.rs, 1.2 * sc.machine.rs);
  EXPECT_NO_THROW(dtc::run(sc));
}
