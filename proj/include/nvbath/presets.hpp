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

#include <string>
#include <vector>

#include "nvbath/models/cpt.hpp"
#include "nvbath/operator.hpp"

namespace nvbath {

/// Readout and bath settings that accompany a CPT parameter set.
struct CPTExperiment {
  CPTModel model;
  double preparation_field = 0;          // omega_e during preparation, rad/us
  std::vector<double> readout_rabi;      // Omega_A^re, rad/us
  double efficiency = 0;
  double t_cond = 0;                     // us
  double gamma_c = 0;                    // 1/us
  int bath_size = 8;
  Eigen::Matrix3d bath_tensor = Eigen::Matrix3d::Zero();  // rad/us, NV frame
};

inline constexpr double mhz(double v) { return kTwoPi * v; }

/// CPT cooling parameter set. Values marked "assumed" are not part of the published set.
inline CPTExperiment preset_togan2011() {
  CPTExperiment e;
  CPTModel& m = e.model;
  m.gamma = 1.0 / 0.012;
  m.gamma_s1 = m.gamma;
  m.gamma_s2 = m.gamma / 120;
  m.gamma_ce = m.gamma / 800;
  m.gamma_s = m.gamma / 33;
  m.omega_a = mhz(2);
  m.hf_excited = mhz(40);
  m.hf_ground = mhz(2.2);
  // assumed
  m.omega_e = mhz(20);
  m.delta_a2 = mhz(3100);
  m.d_gs = mhz(2870);
  m.eps_a1 = mhz(5200);
  m.eps_e12 = mhz(-3900);
  m.gamma_phi = 0;
  m.omega_field = mhz(0.18);

  e.preparation_field = mhz(0.18);
  e.readout_rabi = {mhz(3.2), mhz(10), mhz(8)};
  e.efficiency = 5e-4;
  e.t_cond = 288;
  e.gamma_c = 2.5e-2 * 1e-6;
  e.bath_size = 8;
  e.bath_tensor << -0.28, 0, -0.17, 0, 0.17, 0, -0.17, 0, 0.11;
  e.bath_tensor *= kTwoPi;
  return e;
}

inline std::vector<std::string> preset_names() { return {"togan2011"}; }

}  // namespace nvbath
