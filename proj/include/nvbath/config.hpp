// Copyright 2026 The nvbath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvbath/errors.hpp"
#include "nvbath/models/squeeze.hpp"
#include "nvbath/models/two_level.hpp"
#include "nvbath/presets.hpp"

namespace nvbath {

enum class Scenario { two_level, squeeze, cpt, noise };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::two_level: return "two-level";
    case Scenario::squeeze: return "squeeze";
    case Scenario::cpt: return "cpt";
    case Scenario::noise: return "noise";
  }
  return "";
}

inline Scenario parse_scenario(const std::string& s) {
  for (Scenario k : {Scenario::two_level, Scenario::squeeze, Scenario::cpt, Scenario::noise})
    if (s == scenario_name(k)) return k;
  throw ConfigError("unknown scenario '" + s + "' (expected two-level, squeeze, cpt or noise)");
}

enum class Quantity { frequency, rate, time, dimensionless, count, flag };

/// Internal unit of a quantity.
inline const char* internal_unit(Quantity q) {
  switch (q) {
    case Quantity::frequency: return "rad_per_us";
    case Quantity::rate: return "per_us";
    case Quantity::time: return "us";
    case Quantity::dimensionless: return "dimensionless";
    case Quantity::count: return "count";
    case Quantity::flag: return "flag";
  }
  return "";
}

/// Multiplier from a declared unit to the internal unit; empty when the unit does not fit the quantity.
inline std::optional<double> unit_factor(Quantity q, const std::string& unit) {
  static const std::map<std::string, double> freq{
      {"rad_per_us", 1.0}, {"MHz", kTwoPi}, {"kHz", kTwoPi * 1e-3}, {"GHz", kTwoPi * 1e3}};
  static const std::map<std::string, double> rate{{"per_us", 1.0}, {"per_ns", 1e3}, {"per_ms", 1e-3}, {"per_s", 1e-6}};
  static const std::map<std::string, double> time{{"us", 1.0}, {"ns", 1e-3}, {"ms", 1e3}, {"s", 1e6}};
  const std::map<std::string, double>* table = nullptr;
  switch (q) {
    case Quantity::frequency: table = &freq; break;
    case Quantity::rate: table = &rate; break;
    case Quantity::time: table = &time; break;
    default: return unit == internal_unit(q) ? std::optional<double>(1.0) : std::nullopt;
  }
  const auto it = table->find(unit);
  if (it == table->end()) return std::nullopt;
  return it->second;
}

struct ScenarioConfig;

/// One configurable model parameter. Values are stored flat in internal units.
struct Param {
  std::string name;
  Quantity quantity = Quantity::dimensionless;
  int size = 1;  // 1 scalar, 3 vector, 9 tensor, 0 nonempty list
  std::function<std::vector<double>(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::vector<double>&)> set;
};

struct SweepSpec {
  std::string parameter;       // name, or name.x / name.y / name.z for vectors
  std::vector<double> values;  // internal units
};

struct TraceSpec {
  double t_max = 1000;  // us
  int points = 101;
  double field = 0;     // omega_e during the 14N run, rad/us
};

struct OutputSpec {
  std::string directory = "results";
  bool csv = true;
  bool json = true;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::two_level;
  std::string preset;
  std::map<std::string, std::string> units;  // declared unit per parameter, after defaults
  TwoLevelCycleModel two_level;
  SqueezeModel squeeze;
  CPTExperiment cpt;
  std::optional<SweepSpec> sweep;
  std::optional<std::vector<double>> readout_fields;  // rad/us
  std::optional<TraceSpec> trace;
  OutputSpec output;
  std::string config_hash;
};

namespace config_detail {

inline Param scalar(std::string name, Quantity q, std::function<double&(ScenarioConfig&)> ref) {
  Param p;
  p.name = std::move(name);
  p.quantity = q;
  p.get = [ref](const ScenarioConfig& c) { return std::vector<double>{ref(const_cast<ScenarioConfig&>(c))}; };
  p.set = [ref](ScenarioConfig& c, const std::vector<double>& v) { ref(c) = v.at(0); };
  return p;
}

inline Param vector3(std::string name, Quantity q, std::function<Vec3&(ScenarioConfig&)> ref) {
  Param p;
  p.name = std::move(name);
  p.quantity = q;
  p.size = 3;
  p.get = [ref](const ScenarioConfig& c) {
    const Vec3& v = ref(const_cast<ScenarioConfig&>(c));
    return std::vector<double>{v.x(), v.y(), v.z()};
  };
  p.set = [ref](ScenarioConfig& c, const std::vector<double>& v) { ref(c) = Vec3(v.at(0), v.at(1), v.at(2)); };
  return p;
}

inline Param integer(std::string name, std::function<int&(ScenarioConfig&)> ref) {
  Param p;
  p.name = std::move(name);
  p.quantity = Quantity::count;
  p.get = [ref](const ScenarioConfig& c) { return std::vector<double>{double(ref(const_cast<ScenarioConfig&>(c)))}; };
  p.set = [ref, n = p.name](ScenarioConfig& c, const std::vector<double>& v) {
    if (v.at(0) != std::floor(v.at(0)) || v.at(0) < 1 || v.at(0) > 1e6)
      throw ConfigError("'" + n + "' must be a positive integer");
    ref(c) = static_cast<int>(v.at(0));
  };
  return p;
}

inline std::vector<Param> cpt_params() {
  std::vector<Param> p;
  auto m = [](auto member) { return [member](ScenarioConfig& c) -> double& { return c.cpt.model.*member; }; };
  const Quantity f = Quantity::frequency, r = Quantity::rate;
  p.push_back(scalar("omega_a", f, m(&CPTModel::omega_a)));
  p.push_back(scalar("omega_e", f, m(&CPTModel::omega_e)));
  p.push_back(scalar("delta_a2", f, m(&CPTModel::delta_a2)));
  p.push_back(scalar("omega_field", f, m(&CPTModel::omega_field)));
  p.push_back(scalar("gamma", r, m(&CPTModel::gamma)));
  p.push_back(scalar("gamma_s1", r, m(&CPTModel::gamma_s1)));
  p.push_back(scalar("gamma_s2", r, m(&CPTModel::gamma_s2)));
  p.push_back(scalar("gamma_s", r, m(&CPTModel::gamma_s)));
  p.push_back(scalar("gamma_ce", r, m(&CPTModel::gamma_ce)));
  p.push_back(scalar("gamma_phi", r, m(&CPTModel::gamma_phi)));
  p.push_back(scalar("hf_ground", f, m(&CPTModel::hf_ground)));
  p.push_back(scalar("hf_excited", f, m(&CPTModel::hf_excited)));
  p.push_back(scalar("d_gs", f, m(&CPTModel::d_gs)));
  p.push_back(scalar("eps_a1", f, m(&CPTModel::eps_a1)));
  p.push_back(scalar("eps_e12", f, m(&CPTModel::eps_e12)));
  p.push_back(scalar("phi", Quantity::dimensionless, m(&CPTModel::phi)));
  Param a2;
  a2.name = "a2_coupling";
  a2.quantity = Quantity::flag;
  a2.get = [](const ScenarioConfig& c) { return std::vector<double>{c.cpt.model.a2_coupling ? 1.0 : 0.0}; };
  a2.set = [](ScenarioConfig& c, const std::vector<double>& v) { c.cpt.model.a2_coupling = v.at(0) != 0; };
  p.push_back(a2);
  p.push_back(scalar("preparation_field", f, [](ScenarioConfig& c) -> double& { return c.cpt.preparation_field; }));
  p.push_back(scalar("efficiency", Quantity::dimensionless, [](ScenarioConfig& c) -> double& { return c.cpt.efficiency; }));
  p.push_back(scalar("t_cond", Quantity::time, [](ScenarioConfig& c) -> double& { return c.cpt.t_cond; }));
  p.push_back(scalar("gamma_c", r, [](ScenarioConfig& c) -> double& { return c.cpt.gamma_c; }));
  p.push_back(integer("bath_size", [](ScenarioConfig& c) -> int& { return c.cpt.bath_size; }));
  Param rabi;
  rabi.name = "readout_rabi";
  rabi.quantity = f;
  rabi.size = 0;
  rabi.get = [](const ScenarioConfig& c) { return c.cpt.readout_rabi; };
  rabi.set = [](ScenarioConfig& c, const std::vector<double>& v) { c.cpt.readout_rabi = v; };
  p.push_back(rabi);
  Param tensor;
  tensor.name = "bath_tensor";
  tensor.quantity = f;
  tensor.size = 9;
  tensor.get = [](const ScenarioConfig& c) {
    std::vector<double> v;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v.push_back(c.cpt.bath_tensor(i, j));
    return v;
  };
  tensor.set = [](ScenarioConfig& c, const std::vector<double>& v) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.cpt.bath_tensor(i, j) = v.at(3 * i + j);
  };
  p.push_back(tensor);
  return p;
}

}  // namespace config_detail

/// Parameters accepted in the model block of a scenario.
inline std::vector<Param> scenario_params(Scenario s) {
  using namespace config_detail;
  const Quantity f = Quantity::frequency, r = Quantity::rate;
  std::vector<Param> p;
  switch (s) {
    case Scenario::two_level: {
      auto m = [](auto member) { return [member](ScenarioConfig& c) -> double& { return c.two_level.*member; }; };
      auto v = [](auto member) { return [member](ScenarioConfig& c) -> Vec3& { return c.two_level.*member; }; };
      p.push_back(scalar("omega_r", f, m(&TwoLevelCycleModel::omega_r)));
      p.push_back(scalar("delta", f, m(&TwoLevelCycleModel::delta)));
      p.push_back(scalar("gamma1", r, m(&TwoLevelCycleModel::gamma1)));
      p.push_back(scalar("gamma_phi", r, m(&TwoLevelCycleModel::gamma_phi)));
      p.push_back(vector3("a_g", f, v(&TwoLevelCycleModel::a_g)));
      p.push_back(vector3("a_e", f, v(&TwoLevelCycleModel::a_e)));
      p.push_back(vector3("gamma_n_b", f, v(&TwoLevelCycleModel::gamma_n_b)));
      break;
    }
    case Scenario::squeeze: {
      auto m = [](auto member) { return [member](ScenarioConfig& c) -> double& { return c.squeeze.*member; }; };
      p.push_back(scalar("omega_r", f, m(&SqueezeModel::omega_r)));
      p.push_back(scalar("delta", f, m(&SqueezeModel::delta)));
      p.push_back(scalar("gamma1", r, m(&SqueezeModel::gamma1)));
      p.push_back(scalar("a", f, m(&SqueezeModel::a)));
      p.push_back(integer("n", [](ScenarioConfig& c) -> int& { return c.squeeze.n; }));
      break;
    }
    case Scenario::cpt:
    case Scenario::noise: p = cpt_params(); break;
  }
  return p;
}

/// Fields that must be present when no preset supplies them.
inline std::vector<std::string> required_fields(Scenario s) {
  switch (s) {
    case Scenario::two_level: return {"omega_r", "delta", "gamma1"};
    case Scenario::squeeze: return {"omega_r", "delta", "gamma1", "a", "n"};
    case Scenario::cpt:
      return {"omega_a", "omega_e", "delta_a2", "omega_field", "gamma", "gamma_s1", "gamma_s2", "gamma_s", "gamma_ce",
              "hf_ground", "hf_excited", "d_gs", "eps_a1", "eps_e12", "preparation_field", "efficiency", "t_cond",
              "gamma_c", "bath_size", "readout_rabi", "bath_tensor"};
    case Scenario::noise:
      return {"omega_a", "omega_e", "delta_a2", "omega_field", "gamma", "gamma_s1", "gamma_s2", "gamma_s", "gamma_ce",
              "hf_ground", "hf_excited", "d_gs", "eps_a1", "eps_e12", "gamma_c", "bath_size", "bath_tensor"};
  }
  return {};
}

inline const Param& find_param(const std::vector<Param>& params, const std::string& name) {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw ConfigError("unknown parameter '" + name + "'");
}

inline CPTExperiment preset_by_name(const std::string& name) {
  if (name == "togan2011") return preset_togan2011();
  throw ConfigError("unknown preset '" + name + "'");
}

/// 64-bit FNV-1a digest of the configuration text.
inline std::string config_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Declared unit of a parameter, falling back to the category default and then the internal unit.
inline std::string declared_unit(const ScenarioConfig& c, const Param& p) {
  const auto it = c.units.find(p.name);
  if (it != c.units.end()) return it->second;
  return internal_unit(p.quantity);
}

/// Parameter value converted back to its declared unit.
inline std::vector<double> declared_value(const ScenarioConfig& c, const Param& p) {
  const double f = *unit_factor(p.quantity, declared_unit(c, p));
  std::vector<double> v = p.get(c);
  for (auto& x : v) x /= f;
  return v;
}

/// Reads and sets the scalar addressed by a sweep path such as "omega_a" or "a_g.z".
struct ParamPath {
  Param param;
  int component = 0;

  double get(const ScenarioConfig& c) const { return param.get(c).at(component); }
  void set(ScenarioConfig& c, double v) const {
    std::vector<double> all = param.get(c);
    all.at(component) = v;
    param.set(c, all);
  }
};

inline ParamPath resolve_path(const std::vector<Param>& params, const std::string& path) {
  ParamPath out;
  std::string base = path;
  const auto dot = path.find('.');
  if (dot != std::string::npos) {
    base = path.substr(0, dot);
    const std::string comp = path.substr(dot + 1);
    if (comp == "x") out.component = 0;
    else if (comp == "y") out.component = 1;
    else if (comp == "z") out.component = 2;
    else throw ConfigError("unknown component '" + comp + "' in '" + path + "'");
  }
  out.param = find_param(params, base);
  const int size = out.param.size;
  if (size == 0 || size == 9 || out.param.quantity == Quantity::flag)
    throw ConfigError("parameter '" + base + "' cannot be swept");
  if (size == 3 && dot == std::string::npos) throw ConfigError("vector parameter '" + base + "' needs a component");
  if (size == 1 && dot != std::string::npos) throw ConfigError("scalar parameter '" + base + "' has no components");
  return out;
}

namespace config_detail {

using json = nlohmann::ordered_json;

inline void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError("'" + where + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + where + "' must be finite");
  return x;
}

inline std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError("'" + where + "' must be a string");
  return v.get<std::string>();
}

/// Flattened numeric payload of a model entry.
inline std::vector<double> flatten(const json& v, const Param& p, const std::string& where) {
  std::vector<double> out;
  if (p.quantity == Quantity::flag) {
    if (!v.is_boolean()) throw ConfigError("'" + where + "' must be true or false");
    return {v.get<bool>() ? 1.0 : 0.0};
  }
  if (p.size == 1) return {number(v, where)};
  if (!v.is_array()) throw ConfigError("'" + where + "' must be an array");
  if (p.size == 9) {
    if (v.size() != 3) throw ConfigError("'" + where + "' must be a 3x3 array");
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != 3) throw ConfigError("'" + where + "' must be a 3x3 array");
      for (const auto& x : row) out.push_back(number(x, where));
    }
    return out;
  }
  for (const auto& x : v) out.push_back(number(x, where));
  if (p.size == 3 && out.size() != 3) throw ConfigError("'" + where + "' must have 3 components");
  if (p.size == 0 && out.empty()) throw ConfigError("'" + where + "' must not be empty");
  return out;
}

/// Grid from {"values": [...]} or {"start", "stop", "points"}.
inline std::vector<double> grid(const json& g, const std::string& where, std::set<std::string> extra = {}) {
  extra.insert({"values", "start", "stop", "points"});
  check_keys(g, where, extra);
  std::vector<double> out;
  if (g.contains("values")) {
    if (g.contains("start") || g.contains("stop") || g.contains("points"))
      throw ConfigError("'" + where + "' takes either values or start/stop/points");
    const json& v = g["values"];
    if (!v.is_array()) throw ConfigError("'" + where + ".values' must be an array");
    for (const auto& x : v) out.push_back(number(x, where + ".values"));
  } else {
    for (const char* k : {"start", "stop", "points"})
      if (!g.contains(k)) throw ConfigError("missing required field '" + where + "." + k + "'");
    const double a = number(g["start"], where + ".start"), b = number(g["stop"], where + ".stop");
    const double n = number(g["points"], where + ".points");
    if (n != std::floor(n) || n < 1 || n > 1e6) throw ConfigError("'" + where + ".points' must be a positive integer");
    const int pts = static_cast<int>(n);
    for (int k = 0; k < pts; ++k) out.push_back(pts == 1 ? a : a + (b - a) * k / (pts - 1));
  }
  if (out.empty()) throw ConfigError("'" + where + "' grid is empty");
  return out;
}

inline double factor_for(const ScenarioConfig& c, const Param& p) {
  const std::string unit = declared_unit(c, p);
  const auto f = unit_factor(p.quantity, unit);
  if (!f) throw ConfigError("unit mismatch: '" + unit + "' is not a unit of " + internal_unit(p.quantity) + " for '" + p.name + "'");
  return *f;
}

inline std::string line_info(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace config_detail

/// Parses and validates a JSON scenario document; every value is converted to internal units.
inline ScenarioConfig load_config(const std::string& source, const std::optional<std::string>& preset_override = {}) {
  using namespace config_detail;
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    throw ConfigError("parse error at " + line_info(source, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      (pos == std::string::npos ? msg : msg.substr(pos)));
  }
  check_keys(doc, "", {"scenario", "preset", "units", "model", "sweep", "readout", "trace", "output"});

  ScenarioConfig c;
  c.config_hash = config_digest(source);
  if (!doc.contains("scenario")) throw ConfigError("missing required field 'scenario'");
  c.scenario = parse_scenario(text(doc["scenario"], "scenario"));
  const bool bath_scenario = c.scenario == Scenario::cpt || c.scenario == Scenario::noise;

  if (doc.contains("preset")) c.preset = text(doc["preset"], "preset");
  if (preset_override) c.preset = *preset_override;
  if (!c.preset.empty()) {
    if (!bath_scenario) throw ConfigError("preset '" + c.preset + "' applies to the cpt and noise scenarios only");
    c.cpt = preset_by_name(c.preset);
  }

  const std::vector<Param> params = scenario_params(c.scenario);

  std::map<std::string, std::string> category{{"frequency", "rad_per_us"}, {"rate", "per_us"}, {"time", "us"}};
  if (doc.contains("units")) {
    const json& u = doc["units"];
    if (!u.is_object()) throw ConfigError("'units' must be an object");
    for (const auto& [k, v] : u.items()) {
      const std::string unit = text(v, "units." + k);
      if (category.count(k)) {
        category[k] = unit;
      } else {
        bool known = k == "readout_field" || k == "trace_field" || k == "t_max";
        for (const auto& p : params) known = known || p.name == k;
        if (!known) throw ConfigError("unknown key 'units." + k + "'");
        c.units[k] = unit;
      }
    }
  }
  auto category_unit = [&](Quantity q) -> std::string {
    switch (q) {
      case Quantity::frequency: return category["frequency"];
      case Quantity::rate: return category["rate"];
      case Quantity::time: return category["time"];
      default: return internal_unit(q);
    }
  };
  for (const auto& p : params)
    if (!c.units.count(p.name)) c.units[p.name] = category_unit(p.quantity);
  for (const auto& p : params) factor_for(c, p);
  if (!c.units.count("readout_field")) c.units["readout_field"] = category["frequency"];
  if (!c.units.count("trace_field")) c.units["trace_field"] = category["frequency"];
  if (!c.units.count("t_max")) c.units["t_max"] = category["time"];
  auto extra_factor = [&](const std::string& key, Quantity q) {
    const auto f = unit_factor(q, c.units[key]);
    if (!f) throw ConfigError("unit mismatch: '" + c.units[key] + "' is not a unit of " + internal_unit(q) + " for '" + key + "'");
    return *f;
  };
  const double readout_factor = extra_factor("readout_field", Quantity::frequency);
  const double trace_field_factor = extra_factor("trace_field", Quantity::frequency);
  const double t_max_factor = extra_factor("t_max", Quantity::time);

  std::set<std::string> given;
  if (doc.contains("model")) {
    const json& m = doc["model"];
    if (!m.is_object()) throw ConfigError("'model' must be an object");
    for (const auto& [k, v] : m.items()) {
      bool known = false;
      for (const auto& p : params) known = known || p.name == k;
      if (!known) throw ConfigError("unknown key 'model." + k + "'");
      const Param& p = find_param(params, k);
      std::vector<double> vals = flatten(v, p, "model." + k);
      const double f = factor_for(c, p);
      for (auto& x : vals) x *= f;
      p.set(c, vals);
      given.insert(k);
    }
  }
  if (c.preset.empty())
    for (const auto& r : required_fields(c.scenario))
      if (!given.count(r)) throw ConfigError("missing required field 'model." + r + "'");

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, "sweep", {"parameter", "values", "start", "stop", "points"});
    if (!s.contains("parameter")) throw ConfigError("missing required field 'sweep.parameter'");
    SweepSpec sw;
    sw.parameter = text(s["parameter"], "sweep.parameter");
    const ParamPath path = resolve_path(params, sw.parameter);
    json g = s;
    g.erase("parameter");
    const double f = factor_for(c, path.param);
    for (double v : grid(g, "sweep")) sw.values.push_back(v * f);
    if (path.param.quantity == Quantity::count)
      for (double v : sw.values)
        if (v != std::floor(v) || v < 1) throw ConfigError("sweep over '" + sw.parameter + "' needs positive integers");
    c.sweep = sw;
  }

  if (doc.contains("readout")) {
    if (c.scenario != Scenario::cpt) throw ConfigError("'readout' applies to the cpt scenario only");
    std::vector<double> g = grid(doc["readout"], "readout");
    for (auto& v : g) v *= readout_factor;
    c.readout_fields = g;
  }

  if (doc.contains("trace")) {
    if (c.scenario != Scenario::cpt) throw ConfigError("'trace' applies to the cpt scenario only");
    const json& t = doc["trace"];
    check_keys(t, "trace", {"t_max", "points", "field"});
    TraceSpec ts;
    if (t.contains("t_max")) ts.t_max = number(t["t_max"], "trace.t_max") * t_max_factor;
    if (t.contains("points")) {
      const double n = number(t["points"], "trace.points");
      if (n != std::floor(n) || n < 2 || n > 1e6) throw ConfigError("'trace.points' must be an integer >= 2");
      ts.points = static_cast<int>(n);
    }
    if (t.contains("field")) ts.field = number(t["field"], "trace.field") * trace_field_factor;
    if (!(ts.t_max > 0)) throw ConfigError("'trace.t_max' must be positive");
    c.trace = ts;
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) c.output.directory = text(o["directory"], "output.directory");
    if (o.contains("formats")) {
      if (!o["formats"].is_array()) throw ConfigError("'output.formats' must be an array");
      c.output.csv = c.output.json = false;
      for (const auto& f : o["formats"]) {
        const std::string s = text(f, "output.formats");
        if (s == "csv") c.output.csv = true;
        else if (s == "json") c.output.json = true;
        else throw ConfigError("unknown output format '" + s + "'");
      }
    }
  }

  if (c.scenario == Scenario::two_level) c.two_level.validate();
  if (bath_scenario) {
    c.cpt.model.validate();
    if (!(c.cpt.gamma_c >= 0)) throw ConfigError("'gamma_c' must be nonnegative");
  }
  return c;
}

}  // namespace nvbath
