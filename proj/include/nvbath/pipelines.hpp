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
#include <vector>

#include "nvbath/models/cpt.hpp"
#include "nvbath/nuclear.hpp"
#include "nvbath/parallel.hpp"
#include "nvbath/presets.hpp"

namespace nvbath {

/// Uniform 13C bath with the quasi-static Overhauser sectors it produces.
struct UniformBath {
  int n = 1;
  double a = 0;
  double coefficient = 0;  // 13C flip-rate prefactor

  ConfigSpace sectors() const { return sector_space(n, a); }
};

inline UniformBath uniform_bath(const CPTExperiment& e) {
  const HyperfineTensor t = make_hyperfine(e.bath_tensor);
  return {e.bath_size, t.longitudinal(), c13_rate_coefficient(e.model, t)};
}

/// 14N three-state chain (m0 = +1, 0, -1) averaged over thermal 13C sectors.
struct N14Chain {
  std::vector<double> sector_weight;
  std::vector<Eigen::MatrixXd> generator;

  Eigen::VectorXd at(double t) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
    const Eigen::VectorXd p0 = Eigen::VectorXd::Constant(3, 1.0 / 3);
    for (std::size_t k = 0; k < generator.size(); ++k) p += sector_weight[k] * evolve_populations(generator[k], p0, t);
    return p;
  }

  Eigen::VectorXd steady() const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
    for (std::size_t k = 0; k < generator.size(); ++k) p += sector_weight[k] * steady_populations(generator[k]);
    return p;
  }

  /// First time the m0 = 0 population covers a fraction 1 - 1/e of its way to the asymptote.
  double rise_time() const {
    const double start = 1.0 / 3, target = start + (1 - std::exp(-1.0)) * (steady()(1) - start);
    const bool rising = steady()(1) > start;
    auto reached = [&](double t) { return rising ? at(t)(1) >= target : at(t)(1) <= target; };
    double hi = 1.0;
    while (!reached(hi) && hi < 1e12) hi *= 2;
    double lo = 0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (reached(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

inline N14Chain n14_chain(const CPTModel& m, const UniformBath& bath, unsigned workers) {
  const ConfigSpace s = bath.sectors();
  const double coef = n14_rate_coefficient(m);
  const std::size_t ns = s.size();
  const auto pops = parallel_map<double>(3 * ns, workers, [&](std::size_t i) {
    const double m0 = 1.0 - static_cast<double>(i % 3);
    return ey_population(m, m.hf_ground * m0 + s.h[i / 3]);
  });
  N14Chain c;
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<RateTransition> tr;
    for (int j = 0; j < 3; ++j) {
      const double w = coef * pops[3 * k + j];
      if (j > 0) tr.push_back({std::size_t(j), std::size_t(j - 1), w});
      if (j < 2) tr.push_back({std::size_t(j), std::size_t(j + 1), w});
    }
    c.generator.push_back(build_rate_matrix(3, tr));
    c.sector_weight.push_back(std::exp(s.log_thermal[k]));
  }
  return c;
}

/// Steady 13C sector distribution under CPT pumping at the model's field.
struct BathSteadyState {
  ConfigSpace space;
  std::vector<double> ey;       // <E_y|P|E_y> per sector
  Eigen::VectorXd stationary;
  Eigen::VectorXd thermal;
  double sigma_th2 = 0;
  Moments moments;
};

inline BathSteadyState bath_steady_state(const CPTModel& m, const UniformBath& bath, double gamma_c, unsigned workers) {
  BathSteadyState b;
  b.space = bath.sectors();
  b.ey = parallel_map<double>(b.space.size(), workers, [&](std::size_t k) { return ey_population(m, b.space.h[k]); });
  std::vector<double> h = b.space.h;
  auto lookup = [&](double x) {
    for (std::size_t k = 0; k < h.size(); ++k)
      if (std::abs(h[k] - x) <= 1e-12 * std::max(1.0, std::abs(x))) return bath.coefficient * b.ey[k];
    return bath.coefficient * ey_population(m, x);
  };
  const auto g = build_rate_matrix(b.space, lookup, lookup, gamma_c);
  b.stationary = steady_populations(g);
  b.thermal.resize(b.space.size());
  for (std::size_t k = 0; k < b.space.size(); ++k) b.thermal(k) = std::exp(b.space.log_thermal[k]);
  b.sigma_th2 = 0.25 * bath.a * bath.a * bath.n;
  b.moments = lattice_moments(b.space.h, b.stationary);
  return b;
}

/// Readout dip for one nuclear distribution.
struct ReadoutCurve {
  std::vector<double> field;
  std::vector<double> unconditional, post_selected_raw, post_selected;
};

/// <E_y|P|E_y> at readout field w + h for every (w, sector) pair, reused for several distributions.
inline std::vector<std::vector<double>> readout_populations(const CPTModel& readout, const std::vector<double>& fields,
                                                            const std::vector<double>& h, unsigned workers) {
  const std::size_t nh = h.size();
  const auto flat = parallel_map<double>(fields.size() * nh, workers, [&](std::size_t i) {
    CPTModel m = readout;
    m.omega_field = fields[i / nh];
    return ey_population(m, h[i % nh]);
  });
  std::vector<std::vector<double>> out(fields.size(), std::vector<double>(nh));
  for (std::size_t i = 0; i < flat.size(); ++i) out[i / nh][i % nh] = flat[i];
  return out;
}

inline ReadoutCurve readout_curve(const std::vector<double>& fields, const std::vector<std::vector<double>>& pops,
                                  const Eigen::VectorXd& weights, double efficiency, double gamma, double t_cond) {
  ReadoutCurve c;
  c.field = fields;
  const std::vector<double> w(weights.data(), weights.data() + weights.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Fluorescence f = fluorescence(w, pops[i], efficiency, gamma, t_cond);
    c.unconditional.push_back(f.unconditional);
    c.post_selected_raw.push_back(f.post_selected_raw);
    c.post_selected.push_back(f.post_selected);
  }
  return c;
}

}  // namespace nvbath
