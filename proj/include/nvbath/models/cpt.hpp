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

#include <array>
#include <cmath>
#include <vector>

#include "nvbath/errors.hpp"
#include "nvbath/lindblad.hpp"
#include "nvbath/operator.hpp"
#include "nvbath/rates.hpp"

namespace nvbath {

/// Level indices of the ten-level CPT model.
namespace cpt {
inline constexpr int k0 = 0;
inline constexpr int kB = 1;
inline constexpr int kD = 2;
inline constexpr int kEy = 3;
inline constexpr int kEx = 4;
inline constexpr int kE1 = 5;
inline constexpr int kE2 = 6;
inline constexpr int kA1 = 7;
inline constexpr int kA2 = 8;
inline constexpr int kS = 9;
inline constexpr int kDim = 10;
}  // namespace cpt

/// CPT parameterization. Frequencies in rad/us, rates in 1/us.
struct CPTModel {
  double omega_a = 0;        // Omega_A
  double omega_e = 0;        // Omega_E
  double delta_a2 = 0;       // eps_A2 - eps_A1
  double omega_field = 0;    // omega_e = g_e mu_B B
  double gamma = 0;
  double gamma_s1 = 0;
  double gamma_s2 = 0;
  double gamma_s = 0;        // S -> 0
  double gamma_ce = 0;
  double gamma_phi = 0;
  double hf_ground = 0;      // A_g (14N)
  double hf_excited = 0;     // A_e (14N)
  double d_gs = 0;           // ground zero-field splitting
  double eps_a1 = 0;         // eps_A1 - eps_Ey
  double eps_e12 = 0;        // eps_E1,2 - eps_Ey
  double phi = 0;            // laser phase
  bool a2_coupling = true;

  void validate() const {
    for (double r : {gamma, gamma_s1, gamma_s2, gamma_s, gamma_ce, gamma_phi})
      if (!(r >= 0) || !std::isfinite(r)) throw NegativeRate("CPT decay rate");
  }
};

/// Rotating-frame ten-level model at two-photon detuning omega_e + h.
inline LindbladModel build_cpt(const CPTModel& m, double h) {
  using namespace cpt;
  m.validate();
  LindbladModel out;
  Operator& H = out.hamiltonian;
  H = Operator::Zero(kDim, kDim);
  const double delta = m.omega_field + h;
  H(kB, kD) = H(kD, kB) = delta;
  H(kA2, kA2) = m.delta_a2;
  const cplx phase = std::polar(1.0, m.phi);
  const cplx ca = m.omega_a / std::sqrt(2.0) * phase;
  auto couple = [&H](int i, int j, cplx v) {
    H(i, j) = v;
    H(j, i) = std::conj(v);
  };
  couple(kA1, kB, ca);
  if (m.a2_coupling) couple(kA2, kD, cplx(0, 1) * ca);
  couple(kEy, k0, m.omega_e / 2);

  const double g = m.gamma;
  out.jumps = {
      {kA1, kB, g / 2},          {kA1, kD, g / 2},        {kA2, kB, g / 2},        {kA2, kD, g / 2},
      {kEy, k0, g},              {kA1, kS, m.gamma_s1},   {kA2, kS, m.gamma_s2},   {kS, k0, m.gamma_s},
      {kEy, kB, m.gamma_ce},     {kEy, kD, m.gamma_ce},
      {kEx, k0, g},              {kE1, kB, g / 2},        {kE1, kD, g / 2},        {kE1, kS, m.gamma_s1},
      {kE2, kB, g / 2},          {kE2, kD, g / 2},        {kE2, kS, m.gamma_s1},
  };
  out.pure_dephasing.assign(kDim, 0.0);
  for (int e = kEy; e <= kA2; ++e) out.pure_dephasing[e] = m.gamma_phi;
  return out;
}

inline Operator cpt_steady_state(const CPTModel& m, double h) { return steady_state(build_liouvillian(build_cpt(m, h))); }

inline double ey_population(const CPTModel& m, double h) {
  return clamp_rate(cpt_steady_state(m, h)(cpt::kEy, cpt::kEy).real(), 1.0);
}

struct CPTDerived {
  double w_e = 0, w_a = 0, w_a2 = 0;
  double eta1 = 0, eta2 = 0;
  double d0 = 0, delta0_sq = 0;
  double gamma = 0, gamma_s1 = 0;
};

inline CPTDerived derive(const CPTModel& m) {
  CPTDerived d;
  const double g = m.gamma;
  d.gamma = g;
  d.gamma_s1 = m.gamma_s1;
  d.w_e = m.omega_e * m.omega_e / (2 * m.gamma_ce + g + m.gamma_phi);
  d.w_a = m.omega_a * m.omega_a / (g + m.gamma_s1 + m.gamma_phi);
  d.w_a2 = m.a2_coupling ? 0.5 * m.omega_a * m.omega_a * (g + m.gamma_s2 + m.gamma_phi) / (m.delta_a2 * m.delta_a2) : 0.0;
  d.eta1 = m.gamma_ce / m.gamma_s1;
  d.eta2 = m.gamma_s / (m.gamma_s + m.gamma_ce);
  d.d0 = 1.0 / (2.0 / d.eta2 + 2 * d.eta1 * (g + m.gamma_s1) / d.w_a + (g + 2 * m.gamma_ce) / d.w_e);
  d.delta0_sq = 0.25 * d.eta1 * d.eta2 * d.w_a * d.w_a /
                (d.eta1 * d.eta2 + d.w_a / (g + m.gamma_s1) * (1 + 0.5 * d.eta2 * (g + 2 * m.gamma_ce) / d.w_e));
  return d;
}

/// D0 delta^2/(delta^2 + delta0^2)
inline double cpt_population_zeroth(const CPTDerived& d, double delta) {
  return d.d0 * delta * delta / (delta * delta + d.delta0_sq);
}

/// Zeroth order plus the off-resonant A2 correction.
inline double cpt_population_perturbative(const CPTDerived& d, double delta) {
  const double p0 = cpt_population_zeroth(d, delta);
  return p0 + 0.5 / d.eta1 * d.w_a2 / (d.gamma + d.gamma_s1) * (1 - 2 * p0);
}

/// chi factors of the nuclear flip rates.
struct CPTChi {
  double ground = 0;
  double a1 = 0, a2 = 0, e1 = 0, e2 = 0;

  double excited_sum() const { return a1 + a2 + e1 + e2; }
};

inline CPTChi cpt_chi(const CPTModel& m) {
  using namespace cpt;
  const MismatchTable t = mismatch_table(build_cpt(m, 0));
  auto chi = [&](int f, double gap) { return 0.25 * (t.total_decay(f) + m.gamma_phi) / (gap * gap); };
  CPTChi c;
  c.ground = (m.gamma + 2 * m.gamma_ce) / (m.d_gs * m.d_gs);
  c.a1 = chi(kA1, m.eps_a1);
  c.a2 = chi(kA2, m.eps_a1 + m.delta_a2);
  c.e1 = chi(kE1, m.eps_e12);
  c.e2 = chi(kE2, m.eps_e12);
  return c;
}

/// Prefactor of the 14N flip rate: A_g^2 chi_g + A_e^2 sum_f chi_f.
inline double n14_rate_coefficient(const CPTModel& m) {
  const CPTChi c = cpt_chi(m);
  return m.hf_ground * m.hf_ground * c.ground + m.hf_excited * m.hf_excited * c.excited_sum();
}

/// Symmetric 14N flip rate W_{m0 +- 1 <- m0} at Overhauser shift h.
inline double n14_flip_rate(const CPTModel& m, double h) { return n14_rate_coefficient(m) * ey_population(m, h); }

/// 13C prefactor built from A_{alpha,beta} = e_alpha . A . e_beta (NV frame first, nuclear frame second).
inline double c13_rate_coefficient(const CPTModel& m, const HyperfineTensor& t) {
  const CPTChi c = cpt_chi(m);
  const CVec3 em = t.frame.minus();
  const CVec3 nv_plus(1, cplx(0, 1), 0), nv_minus(1, cplx(0, -1), 0);
  const double amm = std::norm(t.component(nv_minus, em));
  const double apm = std::norm(t.component(nv_plus, em));
  const double aym = std::norm(t.component(Vec3::UnitY(), em));
  const double axm = std::norm(t.component(Vec3::UnitX(), em));
  return c.ground * (amm + apm) / 8 + aym * (c.a1 + c.e1) / 2 + axm * (c.a2 + c.e2) / 2;
}

struct FlipPair {
  double up = 0;
  double down = 0;
};

inline FlipPair c13_flip_rate(const CPTModel& m, double h, const HyperfineTensor& t) {
  const double w = c13_rate_coefficient(m, t) * ey_population(m, h);
  return {w, w};
}

/// <f|S_alpha|E_y> for f in {A1, A2, E1, E2}, from the orbital (x) spin construction of the excited states.
inline std::array<CVec3, 4> excited_spin_elements() {
  // orbital basis (X, Y), spin basis (+1, 0, -1); composite index = 3 * orbital + spin
  const double r = 1 / std::sqrt(2.0);
  const cplx i(0, 1);
  Eigen::Vector2cd ex(1, 0), ey(0, 1);
  const Eigen::Vector2cd e_plus = -(ex + i * ey) * r, e_minus = (ex - i * ey) * r;
  auto spin = [](int m) {
    Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
    v(1 - m) = 1;
    return v;
  };
  auto prod = [](const Eigen::Vector2cd& o, const Eigen::Vector3cd& s) {
    Eigen::Matrix<cplx, 6, 1> v;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b) v(3 * a + b) = o(a) * s(b);
    return v;
  };
  const Eigen::Matrix<cplx, 6, 1> a1 = (prod(e_minus, spin(1)) - prod(e_plus, spin(-1))) * r;
  const Eigen::Matrix<cplx, 6, 1> a2 = (prod(e_minus, spin(1)) + prod(e_plus, spin(-1))) * r;
  const Eigen::Matrix<cplx, 6, 1> e1 = (prod(e_minus, spin(-1)) - prod(e_plus, spin(1))) * r;
  const Eigen::Matrix<cplx, 6, 1> e2 = (prod(e_minus, spin(-1)) + prod(e_plus, spin(1))) * r;
  const Eigen::Matrix<cplx, 6, 1> y0 = prod(ey, spin(0));
  const auto s = spin_ops(SpinSpecies{1.0, "S"});
  const Operator sx = 0.5 * (s.plus + s.minus), sy = cplx(0, -0.5) * (s.plus - s.minus);
  const Operator comps[3] = {sx, sy, s.z};
  std::array<CVec3, 4> out;
  const Eigen::Matrix<cplx, 6, 1>* fs[4] = {&a1, &a2, &e1, &e2};
  for (int f = 0; f < 4; ++f)
    for (int k = 0; k < 3; ++k) {
      const Operator full = kron(Operator::Identity(2, 2), comps[k]);
      out[f](k) = fs[f]->adjoint() * full * y0;
    }
  return out;
}

/// One frequency class of the 13C up-flip operator acting on the electron.
struct FlipChannel {
  Operator flip;
  double omega = 0;
  const char* label = "";
};

/// Up-flip V = (1/2) S . (A e_-) split by frequency class in the rotating frame.
inline std::vector<FlipChannel> c13_flip_channels(const CPTModel& m, const HyperfineTensor& t) {
  using namespace cpt;
  const CVec3 v = t.a.cast<cplx>() * t.frame.minus();
  const cplx v_minus = v(0) - cplx(0, 1) * v(1);  // A_{-,-}
  const cplx v_plus = v(0) + cplx(0, 1) * v(1);   // A_{+,-}
  const double r = 1 / std::sqrt(2.0);
  std::vector<FlipChannel> out;

  // S.v = S_z v_z + (S_+ v_- + S_- v_+)/2 on the ground triplet; |+-1> = (|b> +- |d>)/sqrt2
  const cplx up_amp = 0.25 * std::sqrt(2.0) * v_minus;    // <+1|F|0> and <0|F|-1>
  const cplx down_amp = 0.25 * std::sqrt(2.0) * v_plus;   // <-1|F|0> and <0|F|+1>
  Operator raise = Operator::Zero(kDim, kDim), lower = Operator::Zero(kDim, kDim);
  raise(kB, k0) = r * (up_amp + down_amp);
  raise(kD, k0) = r * (up_amp - down_amp);
  lower(k0, kB) = r * (up_amp + down_amp);
  lower(k0, kD) = r * (-up_amp + down_amp);
  out.push_back({raise, -m.d_gs, "ground 0 -> +-1"});
  out.push_back({lower, m.d_gs, "ground +-1 -> 0"});

  const auto el = excited_spin_elements();
  const int levels[4] = {kA1, kA2, kE1, kE2};
  const double lab_gap[4] = {m.eps_a1, m.eps_a1 + m.delta_a2, m.eps_e12, m.eps_e12};
  const double frame_gap[4] = {0, m.delta_a2, 0, 0};
  const char* names[4] = {"E_y -> A1", "E_y -> A2", "E_y -> E1", "E_y -> E2"};
  for (int f = 0; f < 4; ++f) {
    Operator op = Operator::Zero(kDim, kDim);
    op(levels[f], kEy) = 0.5 * el[f].transpose() * v;
    out.push_back({op, frame_gap[f] - lab_gap[f], names[f]});
  }
  return out;
}

/// Sum of exact resolvent rates over the 13C flip classes.
inline double c13_flip_rate_exact(const CPTModel& m, double h, const HyperfineTensor& t) {
  const Superoperator l = build_liouvillian(build_cpt(m, h));
  const Operator p = steady_state(l);
  double w = 0;
  for (const auto& ch : c13_flip_channels(m, t))
    if (ch.flip.norm() > 0) w += transition_rate_exact(ch.flip, p, Resolvent(l, ch.omega));
  return w;
}

struct Fluorescence {
  double unconditional = 0;
  double post_selected_raw = 0;  // sum p P e^{-x P}
  double post_selected = 0;      // raw divided by the acceptance probability sum p e^{-x P}
};

/// Readout signals for configuration weights p_m and populations <E_y|P_m|E_y>.
inline Fluorescence fluorescence(const std::vector<double>& weights, const std::vector<double>& ey,
                                 double efficiency, double gamma, double t_cond) {
  if (weights.size() != ey.size()) throw DimensionMismatch("fluorescence inputs");
  const double x = efficiency * gamma * t_cond;
  Fluorescence f;
  double accept = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double e = std::exp(-x * ey[k]);
    f.unconditional += weights[k] * ey[k];
    f.post_selected_raw += weights[k] * ey[k] * e;
    accept += weights[k] * e;
  }
  f.post_selected = accept > 0 ? f.post_selected_raw / accept : 0.0;
  return f;
}

/// Divides a readout curve by the mean of its two end points.
inline std::vector<double> normalize_to_plateau(const std::vector<double>& curve) {
  if (curve.empty()) return curve;
  const double plateau = 0.5 * (curve.front() + curve.back());
  std::vector<double> out(curve);
  if (plateau > 0)
    for (auto& v : out) v /= plateau;
  return out;
}

/// Equivalent width area/depth of a normalized dip.
inline double dip_equivalent_width(const std::vector<double>& x, const std::vector<double>& normalized) {
  double area = 0, lo = normalized.front();
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    area += 0.5 * ((1 - normalized[k]) + (1 - normalized[k + 1])) * (x[k + 1] - x[k]);
  for (double v : normalized) lo = std::min(lo, v);
  const double depth = 1 - lo;
  return depth > 0 ? area / depth : 0.0;
}

}  // namespace nvbath
