// Command-line driver: run one scenario, compare both controllers on it, or
// sweep one scenario parameter.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dtc/dtc.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kDiverged = 3 };

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  if (!dir.empty()) fs::create_directories(p);
  return p;
}

std::string telemetry_name(const dtc::Scenario& sc) {
  if (!sc.output.empty()) return sc.output;
  return sc.name + "_" + dtc::to_string(sc.controller) + ".csv";
}

dtc::RippleReport run_one(const dtc::Scenario& sc, const std::string& out_dir) {
  if (out_dir.empty() && sc.output.empty()) return dtc::run(sc);
  const fs::path path = prepare_dir(out_dir) / telemetry_name(sc);
  std::ofstream csv(path);
  if (!csv) throw dtc::ConfigError("cannot write " + path.string());
  auto report = dtc::run(sc, csv);
  std::cerr << "telemetry: " << path.string() << "\n";
  return report;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw dtc::ConfigError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

void print_report(const dtc::RippleReport& r) {
  std::printf("controller         %s\n", r.controller.c_str());
  std::printf("window             [%g, %g) s\n", r.window.start, r.window.end);
  std::printf("torque_mean        %.6g N.m\n", r.torque_mean);
  std::printf("torque_ripple_rms  %.6g N.m\n", r.torque_ripple_rms);
  std::printf("speed_mean         %.6g rpm\n", r.speed_mean);
  std::printf("speed_ripple_rms   %.6g rpm\n", r.speed_ripple_rms);
  std::printf("flux_mean          %.6g Wb\n", r.flux_mean);
  std::printf("flux_ripple_rms    %.6g Wb\n", r.flux_ripple_rms);
  std::printf("flux_ref_mean      %.6g Wb\n", r.flux_ref_mean);
  if (r.settling_time) {
    std::printf("settling_time      %.6g s\n", *r.settling_time);
  } else {
    std::printf("settling_time      never\n");
  }
  std::printf("switch_count       %lld\n", static_cast<long long>(r.switch_count));
}

int cmd_run(const std::string& scenario, const std::string& out_dir) {
  const dtc::Scenario sc = dtc::load_scenario(scenario);
  const auto report = run_one(sc, out_dir);
  print_report(report);
  if (!out_dir.empty()) {
    write_json(fs::path(out_dir) / (sc.name + "_" + report.controller + ".report.json"),
               dtc::to_json(report));
  }
  return kOk;
}

int cmd_compare(const std::string& scenario, const std::string& out_dir) {
  dtc::Scenario sc = dtc::load_scenario(scenario);
  sc.output.clear();
  sc.controller = dtc::Controller::kConventional;
  const auto conventional = run_one(sc, out_dir);
  sc.controller = dtc::Controller::kFuzzy;
  sc.validate();
  const auto fuzzy = run_one(sc, out_dir);
  const auto cmp = dtc::compare(conventional, fuzzy);
  std::printf("scenario: %s\n%s", sc.name.c_str(), dtc::format_comparison(cmp).c_str());
  if (!out_dir.empty()) {
    nlohmann::json j = dtc::to_json(cmp);
    j["scenario"] = sc.name;
    j["reports"] = {dtc::to_json(conventional), dtc::to_json(fuzzy)};
    write_json(fs::path(out_dir) / (sc.name + "_comparison.json"), j);
  }
  return kOk;
}

nlohmann::json parse_value(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

int cmd_sweep(const std::string& scenario, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir) {
  const nlohmann::json base = dtc::load_scenario_json(scenario);
  std::printf("%-14s %14s %14s %12s %12s %10s\n", param.c_str(), "torque_rip", "speed_rip",
              "flux_mean", "flux_ref", "settle_s");
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& text : values) {
    nlohmann::json doc = base;
    const nlohmann::json value = parse_value(text);
    dtc::set_path(doc, param, value);
    dtc::Scenario sc = dtc::scenario_from_json(doc);
    if (!out_dir.empty()) {
      sc.name += "_" + param + "=" + text;
      sc.output.clear();
    }
    const auto r = run_one(sc, out_dir);
    std::printf("%-14s %14.6g %14.6g %12.6g %12.6g %10s\n", text.c_str(),
                r.torque_ripple_rms, r.speed_ripple_rms, r.flux_mean, r.flux_ref_mean,
                r.settling_time ? std::to_string(*r.settling_time).c_str() : "never");
    nlohmann::json row = dtc::to_json(r);
    row["value"] = value;
    rows.push_back(row);
  }
  if (!out_dir.empty()) {
    write_json(fs::path(out_dir) / "sweep.json", {{"param", param}, {"runs", rows}});
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct torque control simulator with fuzzy stator-flux optimizer"};
  app.require_subcommand(1);

  std::string scenario, out_dir, param;
  std::vector<std::string> values;

  auto* run = app.add_subcommand("run", "Run one scenario and print its ripple report");
  run->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Directory for telemetry CSV and report JSON");

  auto* cmp = app.add_subcommand("compare", "Run conventional and fuzzy DTC and compare");
  cmp->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", out_dir, "Directory for telemetry CSV and comparison JSON");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Dotted parameter path, e.g. fuzzy.delta_max")->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Directory for telemetry CSV and sweep JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, out_dir);
    if (*cmp) return cmd_compare(scenario, out_dir);
    if (*sweep) return cmd_sweep(scenario, param, values, out_dir);
  } catch (const dtc::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const dtc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
