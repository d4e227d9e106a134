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
#include <vector>

#include "nvbath/lindblad.hpp"
#include "nvbath/operator.hpp"
#include "nvbath/rates.hpp"

namespace nvbath {

/// Cyclic optical transition |g> <-> |e> with state-dependent Knight fields.
struct TwoLevelCycleModel {
  double omega_r = 1;   // rad/us
  double delta = 0;     // rad/us
  double gamma1 = 1;    // 1/us
  double gamma_phi = 0; // 1/us
  Vec3 a_g = Vec3::Zero();
  Vec3 a_e = Vec3::Zero();
  Vec3 gamma_n_b = Vec3::Zero();

  void validate() const {
    if (!(gamma1 >= 0) || !(gamma_phi >= 0)) throw NegativeRate("two-level rates");
  }
};

namespace two_level {
inline constexpr int kG = 0;
inline constexpr int kE = 1;
}  // namespace two_level

/// Electron-only part: Delta|e><e| + (Omega_R/2)(|e><g| + h.c.), e -> g at gamma1.
inline LindbladModel two_level_electron(const TwoLevelCycleModel& m) {
  m.validate();
  LindbladModel out;
  out.hamiltonian = Operator::Zero(2, 2);
  out.hamiltonian(two_level::kE, two_level::kE) = m.delta;
  out.hamiltonian(two_level::kE, two_level::kG) = out.hamiltonian(two_level::kG, two_level::kE) = m.omega_r / 2;
  out.jumps = {{two_level::kE, two_level::kG, m.gamma1}};
  out.pure_dephasing = {0.0, m.gamma_phi};
  return out;
}

/// Knight field operator projected on a direction u, including the nuclear Zeeman shift.
inline Operator two_level_knight(const TwoLevelCycleModel& m, const CVec3& u) {
  Operator f = Operator::Zero(2, 2);
  const CVec3 ag = (m.a_g - m.gamma_n_b).cast<cplx>();
  const CVec3 ae = (m.a_e - m.gamma_n_b).cast<cplx>();
  f(two_level::kG, two_level::kG) = ag.transpose() * u;
  f(two_level::kE, two_level::kE) = ae.transpose() * u;
  return f;
}

/// Electron (x) nucleus model with hyperfine (F - gamma_N B).I.
inline LindbladModel build_two_level(const TwoLevelCycleModel& m, const SpinSpecies& nucleus) {
  const LindbladModel e = two_level_electron(m);
  const auto s = spin_ops(nucleus);
  const Eigen::Index dn = nucleus.dim();
  const Operator in = Operator::Identity(dn, dn);
  const Operator ix = 0.5 * (s.plus + s.minus);
  const Operator iy = cplx(0, -0.5) * (s.plus - s.minus);
  LindbladModel out;
  out.hamiltonian = kron(e.hamiltonian, in);
  const Operator comps[3] = {ix, iy, s.z};
  for (int k = 0; k < 3; ++k)
    out.hamiltonian += kron(two_level_knight(m, Vec3::Unit(k).cast<cplx>()), comps[k]);
  out.operator_jumps.push_back({kron(projector(2, two_level::kG, two_level::kE), in), m.gamma1});
  out.operator_jumps.push_back({kron(projector(2, two_level::kE, two_level::kE), in), m.gamma_phi});
  return out;
}

/// Pumping rate 2 pi (Omega_R/2)^2 delta^{(gamma1+gamma_phi)/2}(Delta).
inline double two_level_pump_rate(const TwoLevelCycleModel& m) {
  const double g = 0.5 * (m.gamma1 + m.gamma_phi);
  return 0.5 * m.omega_r * m.omega_r * g / (m.delta * m.delta + g * g);
}

struct TwoLevelRates {
  double gamma_phi_numeric = 0;
  double gamma1_numeric = 0;
  double gamma_phi_analytic = 0;
  double gamma1_analytic = 0;
  double t1 = 0;
  double t2 = 0;
  double excited_population = 0;
  double pump_rate = 0;
  Vec3 axis = Vec3::UnitZ();
  double larmor = 0;  // |F-bar|
};

/// Numeric (resolvent) and analytic rates for a spin-1/2 nucleus.
inline TwoLevelRates two_level_rates(const TwoLevelCycleModel& m, double c0) {
  const LindbladModel e = two_level_electron(m);
  const Superoperator l = build_liouvillian(e);
  const Resolvent r0(l, 0.0);
  const Operator& p = *r0.stationary();

  TwoLevelRates out;
  out.excited_population = p(two_level::kE, two_level::kE).real();
  out.pump_rate = two_level_pump_rate(m);
  const Vec3 fbar = knight_field_average(
      {{projector(2, two_level::kG, two_level::kG), m.a_g}, {projector(2, two_level::kE, two_level::kE), m.a_e}}, p,
      m.gamma_n_b);
  const Frame fr = local_frame(fbar.norm() > 0 ? fbar : Vec3::UnitZ());
  out.axis = fr.z;
  out.larmor = fbar.norm();

  out.gamma_phi_numeric = dephasing_rate(two_level_knight(m, fr.z.cast<cplx>()), r0);
  const auto sh = std::make_shared<const Superoperator>(l);
  const Operator f_up = 0.5 * two_level_knight(m, fr.minus());
  const Operator f_down = 0.5 * two_level_knight(m, fr.plus());
  const double w_up = transition_rate_exact(TransitionChannel{f_up, -out.larmor, sh, p});
  const double w_down = transition_rate_exact(TransitionChannel{f_down, out.larmor, sh, p});
  out.gamma1_numeric = 0.5 * (w_up + w_down);

  const Vec3 da = m.a_g - m.a_e;
  const double dz = da.dot(fr.z);
  const double dperp2 = da.squaredNorm() - dz * dz;
  const double pref = c0 * out.excited_population / (m.gamma1 + 2 * out.pump_rate);
  out.gamma_phi_analytic = pref * dz * dz;
  out.gamma1_analytic = 0.5 * pref * std::max(dperp2, 0.0);

  out.t1 = 1.0 / (2 * out.gamma1_numeric);
  out.t2 = 1.0 / (out.gamma_phi_numeric + out.gamma1_numeric);
  return out;
}

/// Reference point for the c0 calibration: resonant drive Omega_R = gamma1, e_z || (a_g - a_e).
inline TwoLevelCycleModel c0_calibration_model() {
  TwoLevelCycleModel m;
  m.omega_r = 1.0;
  m.gamma1 = 1.0;
  m.a_e = Vec3(0, 0, 1e-3);
  return m;
}

/// c0 extracted from one calibration run, then frozen for the process lifetime.
inline double calibrated_c0() {
  static const double c0 = [] {
    const auto m = c0_calibration_model();
    const auto r = two_level_rates(m, 1.0);
    return r.gamma_phi_numeric / r.gamma_phi_analytic;
  }();
  return c0;
}

}  // namespace nvbath
