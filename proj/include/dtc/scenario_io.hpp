#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dtc/errors.hpp"
#include "dtc/sim.hpp"

namespace dtc {

// Scenario documents are JSON objects that mirror the Scenario struct.
// Every key is optional; unknown keys are rejected so typos surface as
// config errors instead of silently running defaults.
//
//   {
//     "name": "noload", "controller": "fuzzy",
//     "duration": 2.0, "dt": 5e-5, "vdc": 400,
//     "mode": "speed", "speed_ref_rpm": 1500, "torque_ref": 0,
//     "load_profile": [{"time": 0.0, "torque": 0.0}],
//     "metrics_window": {"start": 1.0, "end": 2.0},
//     "machine": {"rs": ..., "rr": ..., ...},
//     "control": {"flux_ref": 0.7, "flux_band": 0, "torque_band": 0,
//                 "speed_pi": {"kp": 2, "ki": 20, "torque_limit": 50}},
//     "fuzzy": {"torque_error_scale": 49.7, "flux_min": 0.3,
//               "flux_rated": 0.7, "delta_max": 5e-4, "update_divisor": 1,
//               "membership": {"torque_error": [6], "flux_level": [3],
//                              "output": [7]},
//               "rules": [["0","PS","PB","0","PS","PB"], ...]},
//     "estimator": {"rs": 0.7334},
//     "output": "noload.csv",
//     "blowup_bound": 1e6
//   }

using Json = nlohmann::json;

namespace detail {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : j_.items()) {
      bool ok = false;
      for (auto key : keys) ok = ok || key == k;
      if (!ok) throw ConfigError("unknown key '" + at(k) + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& raw(const char* key) const { return j_.at(key); }

  void get(const char* key, double& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
    out = v.get<double>();
  }
  void get(const char* key, int& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(at(key) + " must be an integer");
    out = v.get<int>();
  }
  void get(const char* key, std::string& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
    out = v.get<std::string>();
  }
  template <std::size_t N>
  void get(const char* key, std::array<double, N>& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array() || v.size() != N) {
      throw ConfigError(at(key) + " must be an array of " + std::to_string(N) + " numbers");
    }
    for (std::size_t i = 0; i < N; ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + " must hold numbers");
      out[i] = v[i].get<double>();
    }
  }

  Reader child(const char* key) const { return Reader(j_.at(key), at(key)); }
  std::string at(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
  std::string where() const { return path_.empty() ? "scenario" : path_; }

 private:
  const Json& j_;
  std::string path_;
};

inline void read_machine(const Reader& r, MachineParams& m) {
  r.allow({"rs", "rr", "ls", "lr", "lm", "pole_pairs", "inertia", "friction",
           "rated_power", "rated_voltage", "rated_frequency", "rated_speed"});
  r.get("rs", m.rs);
  r.get("rr", m.rr);
  r.get("ls", m.ls);
  r.get("lr", m.lr);
  r.get("lm", m.lm);
  r.get("pole_pairs", m.pole_pairs);
  r.get("inertia", m.inertia);
  r.get("friction", m.friction);
  r.get("rated_power", m.rated_power);
  r.get("rated_voltage", m.rated_voltage);
  r.get("rated_frequency", m.rated_frequency);
  r.get("rated_speed", m.rated_speed);
}

inline void read_control(const Reader& r, ControlConfig& c) {
  r.allow({"flux_ref", "flux_band", "torque_band", "speed_pi"});
  r.get("flux_ref", c.flux_ref);
  r.get("flux_band", c.flux_band);
  r.get("torque_band", c.torque_band);
  if (r.has("speed_pi")) {
    const Reader pi = r.child("speed_pi");
    pi.allow({"kp", "ki", "torque_limit"});
    pi.get("kp", c.speed_pi.kp);
    pi.get("ki", c.speed_pi.ki);
    pi.get("torque_limit", c.speed_pi.torque_limit);
  }
}

inline void read_fuzzy(const Reader& r, Scenario& sc) {
  fuzzy::FuzzyConfig& f = sc.fuzzy;
  r.allow({"torque_error_scale", "flux_min", "flux_rated", "delta_max",
           "update_divisor", "membership", "rules"});
  r.get("torque_error_scale", f.torque_error_scale);
  r.get("flux_min", f.flux_min);
  r.get("flux_rated", f.flux_rated);
  r.get("delta_max", f.delta_max);
  r.get("update_divisor", sc.fuzzy_update_divisor);
  if (r.has("membership")) {
    const Reader m = r.child("membership");
    m.allow({"torque_error", "flux_level", "output"});
    m.get("torque_error", f.torque_centers);
    m.get("flux_level", f.flux_centers);
    m.get("output", f.output_centers);
  }
  if (r.has("rules")) {
    const Json& rows = r.raw("rules");
    const std::string key = r.at("rules");
    if (!rows.is_array() || rows.size() != fuzzy::kFluxSets) {
      throw ConfigError(key + " must have 3 rows (S, M, B)");
    }
    for (std::size_t i = 0; i < fuzzy::kFluxSets; ++i) {
      if (!rows[i].is_array() || rows[i].size() != fuzzy::kTorqueSets) {
        throw ConfigError(key + " rows must have 6 entries (NB..PB)");
      }
      for (std::size_t j = 0; j < fuzzy::kTorqueSets; ++j) {
        const Json& cell = rows[i][j];
        const auto term = cell.is_string() ? fuzzy::parse_term(cell.get<std::string>())
                                           : std::nullopt;
        if (!term) throw ConfigError(key + ": bad term " + cell.dump());
        f.rules[i][j] = *term;
      }
    }
  }
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  Scenario sc;
  const detail::Reader r(j, "");
  r.allow({"name", "controller", "duration", "dt", "vdc", "mode", "speed_ref_rpm",
           "torque_ref", "load_profile", "metrics_window", "machine", "control",
           "fuzzy", "estimator", "output", "blowup_bound"});
  r.get("name", sc.name);

  std::string controller = to_string(sc.controller);
  r.get("controller", controller);
  if (controller == "conventional") {
    sc.controller = Controller::kConventional;
  } else if (controller == "fuzzy") {
    sc.controller = Controller::kFuzzy;
  } else {
    throw ConfigError("controller must be 'conventional' or 'fuzzy'");
  }

  std::string mode = to_string(sc.mode);
  r.get("mode", mode);
  if (mode == "speed") {
    sc.mode = ReferenceMode::kSpeed;
  } else if (mode == "torque") {
    sc.mode = ReferenceMode::kTorque;
  } else {
    throw ConfigError("mode must be 'speed' or 'torque'");
  }

  r.get("duration", sc.duration);
  r.get("dt", sc.dt);
  r.get("vdc", sc.vdc);
  r.get("speed_ref_rpm", sc.speed_ref_rpm);
  r.get("torque_ref", sc.torque_ref);
  r.get("output", sc.output);
  r.get("blowup_bound", sc.blowup_bound);

  if (r.has("load_profile")) {
    const Json& steps = r.raw("load_profile");
    if (!steps.is_array()) throw ConfigError("load_profile must be an array");
    sc.load_profile.clear();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const detail::Reader s(steps[i], "load_profile[" + std::to_string(i) + "]");
      s.allow({"time", "torque"});
      LoadStep step;
      s.get("time", step.time);
      s.get("torque", step.torque);
      sc.load_profile.push_back(step);
    }
  }
  if (r.has("metrics_window")) {
    const detail::Reader w = r.child("metrics_window");
    w.allow({"start", "end"});
    w.get("start", sc.window.start);
    w.get("end", sc.window.end);
  } else {
    sc.window.end = sc.duration;
    sc.window.start = std::min(1.0, 0.5 * sc.duration);
  }
  if (r.has("machine")) detail::read_machine(r.child("machine"), sc.machine);
  if (r.has("control")) detail::read_control(r.child("control"), sc.control);

  // The optimizer ceiling follows the conventional reference unless set.
  sc.fuzzy.flux_rated = sc.control.flux_ref;
  if (r.has("fuzzy")) detail::read_fuzzy(r.child("fuzzy"), sc);

  if (r.has("estimator")) {
    const detail::Reader e = r.child("estimator");
    e.allow({"rs"});
    double rs = sc.machine.rs;
    e.get("rs", rs);
    if (e.has("rs")) sc.estimator_rs = rs;
  }
  sc.validate();
  return sc;
}

inline Json parse_scenario_text(std::string_view text) {
  try {
    return Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }
}

inline Json load_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

inline Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_scenario_json(path));
}

/// Sets a dotted path ("fuzzy.delta_max", "control.speed_pi.kp") to `value`,
/// creating intermediate objects as needed.
inline void set_path(Json& doc, std::string_view path, const Json& value) {
  if (path.empty()) throw ConfigError("empty parameter path");
  Json* node = &doc;
  while (true) {
    const auto dot = path.find('.');
    const std::string key(path.substr(0, dot));
    if (key.empty()) throw ConfigError("malformed parameter path");
    if (!node->is_object()) throw ConfigError("parameter path crosses a non-object");
    if (dot == std::string_view::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = Json::object();
    path.remove_prefix(dot + 1);
  }
}

}  // namespace dtc
