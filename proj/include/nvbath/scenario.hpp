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
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvbath/config.hpp"
#include "nvbath/models/cpt.hpp"
#include "nvbath/models/squeeze.hpp"
#include "nvbath/models/two_level.hpp"
#include "nvbath/nuclear.hpp"
#include "nvbath/parallel.hpp"
#include "nvbath/pipelines.hpp"
#include "nvbath/results.hpp"
#include "nvbath/version.hpp"

namespace nvbath {

struct RunOutput {
  std::vector<ResultTable> tables;
  nlohmann::ordered_json summary;
};

using Logger = std::function<void(const std::string&)>;

namespace scenario_detail {

using json = nlohmann::ordered_json;

/// Sweep coordinate column, or a point index when no sweep is configured.
inline Column sweep_column(const ScenarioConfig& c) {
  if (!c.sweep) return {"point", "index"};
  const ParamPath p = resolve_path(scenario_params(c.scenario), c.sweep->parameter);
  return {c.sweep->parameter, internal_unit(p.param.quantity)};
}

/// Per-point configurations in grid order.
inline std::vector<ScenarioConfig> sweep_points(const ScenarioConfig& c) {
  if (!c.sweep) return {c};
  const ParamPath p = resolve_path(scenario_params(c.scenario), c.sweep->parameter);
  std::vector<ScenarioConfig> out;
  for (double v : c.sweep->values) {
    ScenarioConfig k = c;
    p.set(k, v);
    out.push_back(std::move(k));
  }
  return out;
}

inline double sweep_coordinate(const ScenarioConfig& c, std::size_t k) { return c.sweep ? c.sweep->values[k] : double(k); }

template <class Fn>
std::vector<std::vector<double>> sweep_rows(const ScenarioConfig& c, unsigned workers, Fn&& row) {
  const auto pts = sweep_points(c);
  auto rows = parallel_map<std::vector<double>>(pts.size(), workers, [&](std::size_t k) {
    try {
      std::vector<double> r{sweep_coordinate(c, k)};
      for (double v : row(pts[k])) r.push_back(v);
      return r;
    } catch (const Error& e) {
      std::string where = c.sweep ? c.sweep->parameter + " = " + format_value(c.sweep->values[k]) : "base point";
      throw Error(e.kind(), std::string(e.what()) + " [at " + where + "]");
    }
  });
  return rows;
}

inline ResultTable table(const ScenarioConfig& c, std::string name, std::vector<Column> cols) {
  ResultTable t;
  t.name = std::move(name);
  t.columns = std::move(cols);
  t.metadata = {c.preset, NVBATH_VERSION, c.config_hash};
  return t;
}

inline RunOutput run_two_level(const ScenarioConfig& c, unsigned workers) {
  RunOutput out;
  const double c0 = calibrated_c0();
  ResultTable t = table(c, "two_level", {sweep_column(c),
                                         {"gamma_phi_analytic", "per_us"},
                                         {"gamma_phi_numeric", "per_us"},
                                         {"gamma1_analytic", "per_us"},
                                         {"gamma1_numeric", "per_us"},
                                         {"T1", "us"},
                                         {"T2", "us"}});
  for (auto& r : sweep_rows(c, workers, [&](const ScenarioConfig& k) {
         const TwoLevelRates x = two_level_rates(k.two_level, c0);
         return std::vector<double>{x.gamma_phi_analytic, x.gamma_phi_numeric, x.gamma1_analytic, x.gamma1_numeric,
                                    x.t1, x.t2};
       }))
    t.add_row(std::move(r));
  const TwoLevelRates base = two_level_rates(c.two_level, c0);
  out.summary["c0"] = c0;
  out.summary["excited_population"] = base.excited_population;
  out.summary["pump_rate_per_us"] = base.pump_rate;
  out.summary["quantization_axis"] = {base.axis.x(), base.axis.y(), base.axis.z()};
  out.summary["larmor_rad_per_us"] = base.larmor;
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_squeeze(const ScenarioConfig& c, unsigned workers) {
  RunOutput out;
  const double c0 = calibrated_c0();
  ResultTable t = table(c, "squeeze", {sweep_column(c),
                                       {"P11", "dimensionless"},
                                       {"P11_prime", "per_rad_per_us"},
                                       {"t_S", "us"},
                                       {"gamma_phi", "per_us"},
                                       {"gamma_phi_analytic", "per_us"},
                                       {"N2_gamma_phi_t_S_over_N", "dimensionless"},
                                       {"N2_gamma_phi_t_S_over_N_analytic", "dimensionless"}});
  for (auto& r : sweep_rows(c, workers, [&](const ScenarioConfig& k) {
         const SqueezeCoefficients x = squeeze_coefficients(k.squeeze, c0);
         const double n = k.squeeze.n;
         return std::vector<double>{x.p11, x.p11_prime, x.t_s, x.gamma_phi, x.gamma_phi_analytic,
                                    x.dephasing_product / n, x.dephasing_product_analytic / n};
       }))
    t.add_row(std::move(r));
  out.summary["c0"] = c0;
  out.tables.push_back(std::move(t));
  return out;
}

inline RunOutput run_cpt(const ScenarioConfig& c, unsigned workers, const Logger& log) {
  RunOutput out;
  ResultTable t = table(c, "cpt_sweep", {sweep_column(c),
                                         {"Ey_population", "dimensionless"},
                                         {"Ey_perturbative", "dimensionless"},
                                         {"S_population", "dimensionless"},
                                         {"n14_rate", "per_us"},
                                         {"c13_rate", "per_us"}});
  for (auto& r : sweep_rows(c, workers, [&](const ScenarioConfig& k) {
         const CPTModel& m = k.cpt.model;
         const Operator p = cpt_steady_state(m, 0.0);
         const double ey = clamp_rate(p(cpt::kEy, cpt::kEy).real(), 1.0);
         const UniformBath bath = uniform_bath(k.cpt);
         return std::vector<double>{ey, cpt_population_perturbative(derive(m), m.omega_field),
                                    p(cpt::kS, cpt::kS).real(), n14_rate_coefficient(m) * ey, bath.coefficient * ey};
       }))
    t.add_row(std::move(r));
  out.tables.push_back(std::move(t));

  const CPTDerived d = derive(c.cpt.model);
  out.summary["D0"] = d.d0;
  out.summary["delta0_rad_per_us"] = std::sqrt(d.delta0_sq);
  out.summary["W_E_per_us"] = d.w_e;
  out.summary["W_A_per_us"] = d.w_a;
  out.summary["W_A2_per_us"] = d.w_a2;
  out.summary["eta1"] = d.eta1;
  out.summary["eta2"] = d.eta2;

  if (c.readout_fields) {
    log("cpt: nuclear steady state at the preparation field");
    const UniformBath bath = uniform_bath(c.cpt);
    CPTModel prep = c.cpt.model;
    prep.omega_field = c.cpt.preparation_field;
    const BathSteadyState ss = bath_steady_state(prep, bath, c.cpt.gamma_c, workers);
    out.summary["variance_ratio"] = ss.moments.variance / ss.sigma_th2;
    out.summary["bath_size"] = bath.n;
    out.summary["bath_coupling_rad_per_us"] = bath.a;

    const std::vector<double>& fields = *c.readout_fields;
    std::vector<Column> cols{{"readout_field", "rad_per_us"}};
    std::vector<std::vector<double>> columns;
    json widths = json::array();
    for (std::size_t r = 0; r < c.cpt.readout_rabi.size(); ++r) {
      log("cpt: readout curve " + std::to_string(r + 1) + " of " + std::to_string(c.cpt.readout_rabi.size()));
      CPTModel ro = c.cpt.model;
      ro.omega_a = c.cpt.readout_rabi[r];
      const auto pops = readout_populations(ro, fields, ss.space.h, workers);
      const ReadoutCurve th = readout_curve(fields, pops, ss.thermal, c.cpt.efficiency, ro.gamma, c.cpt.t_cond);
      const ReadoutCurve pr = readout_curve(fields, pops, ss.stationary, c.cpt.efficiency, ro.gamma, c.cpt.t_cond);
      const std::string s = "_r" + std::to_string(r);
      const std::vector<std::vector<double>> curves{
          normalize_to_plateau(th.unconditional), normalize_to_plateau(pr.unconditional),
          normalize_to_plateau(th.post_selected), normalize_to_plateau(pr.post_selected)};
      for (const char* n : {"unconditional_thermal", "unconditional_prepared", "post_selected_thermal",
                            "post_selected_prepared"})
        cols.push_back({n + s, "normalized"});
      for (const auto& cv : curves) columns.push_back(cv);
      json w;
      w["readout_rabi_rad_per_us"] = ro.omega_a;
      w["unconditional_thermal"] = dip_equivalent_width(fields, curves[0]);
      w["unconditional_prepared"] = dip_equivalent_width(fields, curves[1]);
      w["post_selected_thermal"] = dip_equivalent_width(fields, curves[2]);
      w["post_selected_prepared"] = dip_equivalent_width(fields, curves[3]);
      widths.push_back(w);
    }
    ResultTable f = table(c, "fluorescence", cols);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      std::vector<double> row{fields[i]};
      for (const auto& cv : columns) row.push_back(cv[i]);
      f.add_row(std::move(row));
    }
    out.summary["dip_equivalent_width_rad_per_us"] = widths;
    out.tables.push_back(std::move(f));
  }

  if (c.trace) {
    log("cpt: 14N polarization trace");
    CPTModel m = c.cpt.model;
    m.omega_field = c.trace->field;
    const N14Chain chain = n14_chain(m, uniform_bath(c.cpt), workers);
    ResultTable tr = table(c, "n14_trace", {{"t", "us"}, {"p_plus1", "dimensionless"}, {"p_0", "dimensionless"},
                                            {"p_minus1", "dimensionless"}});
    for (int k = 0; k < c.trace->points; ++k) {
      const double time = c.trace->t_max * k / (c.trace->points - 1);
      const Eigen::VectorXd p = chain.at(time);
      tr.add_row({time, p(0), p(1), p(2)});
    }
    out.summary["n14_rise_time_us"] = chain.rise_time();
    out.summary["n14_steady_p0"] = chain.steady()(1);
    out.tables.push_back(std::move(tr));
  }
  return out;
}

struct NoiseResult {
  ResultTable lattice;
  ResultTable density;
  json scalars;
};

inline NoiseResult noise_point(const ScenarioConfig& c, unsigned workers) {
  const UniformBath bath = uniform_bath(c.cpt);
  const CPTModel& m = c.cpt.model;
  const double half_gc = 0.5 * c.cpt.gamma_c;
  const ConfigSpace sec = sector_space(bath.n, bath.a);
  std::map<double, double> cache;
  const auto ey = parallel_map<double>(sec.size(), workers, [&](std::size_t k) { return ey_population(m, sec.h[k]); });
  for (std::size_t k = 0; k < sec.size(); ++k) cache[sec.h[k]] = bath.coefficient * ey[k] + half_gc;
  auto w = [&](double h) {
    const auto it = cache.lower_bound(h - 1e-9 * std::max(1.0, std::abs(h)));
    if (it != cache.end() && std::abs(it->first - h) <= 1e-9 * std::max(1.0, std::abs(h))) return it->second;
    return bath.coefficient * ey_population(m, h) + half_gc;
  };
  NoiseOptions opt;
  opt.workers = workers;
  const NoiseDistribution nd = noise_distribution(w, w, bath.n, bath.a, opt);

  std::vector<double> wl;
  for (double h : sec.h) wl.push_back(w(h));
  const Eigen::VectorXd analytic = noise_on_lattice(nd, sec.h, wl, wl);
  Eigen::VectorXd brute;
  const bool product = bath.n <= 12;
  if (product) {
    const Eigen::VectorXd pp = steady_populations(build_rate_matrix(product_space(bath.n, bath.a), w, w, 0.0));
    brute = project_to_sectors(pp, product_sector_index(bath.n), bath.n + 1);
  } else {
    brute = steady_populations(build_rate_matrix(sec, w, w, 0.0));
  }

  NoiseResult r;
  r.lattice = table(c, "noise_lattice", {{"h", "rad_per_us"}, {"p_analytic", "probability"}, {"p_bruteforce", "probability"}});
  for (std::size_t k = 0; k < sec.size(); ++k) r.lattice.add_row({sec.h[k], analytic(k), brute(k)});
  r.density = table(c, "noise_density", {{"h", "rad_per_us"}, {"density", "per_rad_per_us"}});
  for (std::size_t k = 0; k < nd.grid.size(); ++k) r.density.add_row({nd.grid[k], nd.density[k]});

  const Moments mb = lattice_moments(sec.h, brute);
  r.scalars["h_star_rad_per_us"] = nd.h_star;
  r.scalars["sigma_over_sigma_th"] = std::sqrt(nd.sigma2 / nd.sigma_th2);
  r.scalars["tv_distance"] = total_variation(analytic, brute);
  r.scalars["variance_ratio_bruteforce"] = mb.variance / nd.sigma_th2;
  r.scalars["fixed_points"] = nd.roots.size();
  r.scalars["integrated_form"] = nd.integrated_form;
  r.scalars["oracle"] = product ? "product" : "sector";
  r.scalars["bath_size"] = bath.n;
  r.scalars["bath_coupling_rad_per_us"] = bath.a;
  return r;
}

inline RunOutput run_noise(const ScenarioConfig& c, unsigned workers, const Logger& log) {
  RunOutput out;
  log("noise: analytic distribution and brute-force oracle");
  NoiseResult base = noise_point(c, workers);
  out.summary = base.scalars;
  out.tables.push_back(std::move(base.lattice));
  out.tables.push_back(std::move(base.density));
  if (c.sweep) {
    ResultTable t = table(c, "noise_sweep", {sweep_column(c),
                                             {"h_star", "rad_per_us"},
                                             {"sigma_over_sigma_th", "dimensionless"},
                                             {"tv_distance", "dimensionless"},
                                             {"variance_ratio_bruteforce", "dimensionless"}});
    for (auto& r : sweep_rows(c, 1, [&](const ScenarioConfig& k) {
           const NoiseResult x = noise_point(k, workers);
           return std::vector<double>{x.scalars["h_star_rad_per_us"].get<double>(),
                                      x.scalars["sigma_over_sigma_th"].get<double>(),
                                      x.scalars["tv_distance"].get<double>(),
                                      x.scalars["variance_ratio_bruteforce"].get<double>()};
         }))
      t.add_row(std::move(r));
    out.tables.push_back(std::move(t));
  }
  return out;
}

inline json parameters_block(const ScenarioConfig& c) {
  json p = json::object();
  for (const auto& param : scenario_params(c.scenario)) {
    const std::vector<double> v = declared_value(c, param);
    json entry;
    if (param.quantity == Quantity::flag) entry["value"] = v[0] != 0;
    else if (param.size == 1) entry["value"] = v[0];
    else if (param.size == 9) entry["value"] = {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
    else entry["value"] = v;
    entry["unit"] = declared_unit(c, param);
    p[param.name] = entry;
  }
  return p;
}

}  // namespace scenario_detail

/// Runs a validated scenario. Output is independent of the worker count.
inline RunOutput run_scenario(const ScenarioConfig& c, unsigned workers = 1, const Logger& log = [](const std::string&) {}) {
  using namespace scenario_detail;
  RunOutput body;
  try {
    switch (c.scenario) {
      case Scenario::two_level: body = run_two_level(c, workers); break;
      case Scenario::squeeze: body = run_squeeze(c, workers); break;
      case Scenario::cpt: body = run_cpt(c, workers, log); break;
      case Scenario::noise: body = run_noise(c, workers, log); break;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("scenario '") + scenario_name(c.scenario) + "': " + e.what());
  }
  RunOutput out;
  out.tables = std::move(body.tables);
  json& s = out.summary;
  s["scenario"] = scenario_name(c.scenario);
  s["preset"] = c.preset;
  s["version"] = NVBATH_VERSION;
  s["config_hash"] = c.config_hash;
  s["parameters"] = parameters_block(c);
  if (c.sweep) {
    s["sweep"]["parameter"] = c.sweep->parameter;
    s["sweep"]["points"] = c.sweep->values.size();
  }
  json tables = json::array();
  for (const auto& t : out.tables) {
    json e;
    e["name"] = t.name;
    e["file"] = t.name + ".csv";
    e["rows"] = t.rows.size();
    json cols = json::array();
    for (const auto& col : t.columns) cols.push_back(col.name + ":" + col.unit);
    e["columns"] = cols;
    tables.push_back(e);
  }
  s["tables"] = tables;
  s["results"] = body.summary;
  return out;
}

}  // namespace nvbath
