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

#include "nvbath/errors.hpp"
#include "nvbath/lindblad.hpp"
#include "nvbath/rates.hpp"

namespace nvbath {

/// Microwave-driven |0> <-> |+1> with unidirectional |+1> -> |0> relaxation.
struct SqueezeModel {
  double omega_r = 0.5;  // rad/us
  double delta = 2;      // rad/us
  double gamma1 = 1;     // 1/us
  double a = 1e-3;       // rad/us
  int n = 10;
};

namespace squeeze {
inline constexpr int k0 = 0;
inline constexpr int kPlus = 1;
}  // namespace squeeze

inline LindbladModel build_squeeze(const SqueezeModel& m, double h = 0) {
  if (!(m.gamma1 > 0)) throw InvalidArgument("gamma1 must be positive");
  LindbladModel out;
  out.hamiltonian = Operator::Zero(2, 2);
  out.hamiltonian(squeeze::kPlus, squeeze::kPlus) = m.delta + h;
  out.hamiltonian(squeeze::kPlus, squeeze::k0) = out.hamiltonian(squeeze::k0, squeeze::kPlus) = m.omega_r / 2;
  out.jumps = {{squeeze::kPlus, squeeze::k0, m.gamma1}};
  return out;
}

/// W(h) = 2 pi (Omega_R/2)^2 delta^{(gamma1/2)}(Delta + h)
inline double squeeze_pump_rate(const SqueezeModel& m, double h) {
  const double g = 0.5 * m.gamma1;
  const double x = m.delta + h;
  return 0.5 * m.omega_r * m.omega_r * g / (x * x + g * g);
}

inline double squeeze_p11(const SqueezeModel& m, double h) {
  const double w = squeeze_pump_rate(m, h);
  return w / (m.gamma1 + 2 * w);
}

inline double squeeze_p11_derivative(const SqueezeModel& m, double h) {
  const double g = 0.5 * m.gamma1;
  const double x = m.delta + h;
  const double w = squeeze_pump_rate(m, h);
  const double dw = -w * 2 * x / (x * x + g * g);
  const double den = m.gamma1 + 2 * w;
  return m.gamma1 * dw / (den * den);
}

struct SqueezeCoefficients {
  double p11 = 0;
  double p11_prime = 0;
  double t_s = 0;
  double gamma_phi = 0;           // single-flip dephasing from the resolvent
  double gamma_phi_analytic = 0;  // c0 P11 (gamma1 + 2W)^-1 a^2
  double dephasing_product = 0;   // N^2 Gamma_phi t_S
  double dephasing_product_analytic = 0;
};

inline SqueezeCoefficients squeeze_coefficients(const SqueezeModel& m, double c0) {
  SqueezeCoefficients out;
  out.p11 = squeeze_p11(m, 0);
  out.p11_prime = squeeze_p11_derivative(m, 0);
  if (m.a == 0) throw DivergentSqueezingTime("zero coupling");
  if (std::abs(out.p11_prime) < 1e-14 * std::max(out.p11, 1e-300) / m.gamma1 || out.p11_prime == 0)
    throw DivergentSqueezingTime("P11'(0) vanishes");
  const double n = m.n;
  out.t_s = 1.0 / (std::abs(out.p11_prime) * n * m.a * m.a);

  const Superoperator l = build_liouvillian(build_squeeze(m));
  out.gamma_phi = dephasing_rate(m.a * projector(2, squeeze::kPlus, squeeze::kPlus), l);
  const double w = squeeze_pump_rate(m, 0);
  out.gamma_phi_analytic = c0 * out.p11 * m.a * m.a / (m.gamma1 + 2 * w);
  out.dephasing_product = n * n * out.gamma_phi * out.t_s;
  out.dephasing_product_analytic = n * n * out.gamma_phi_analytic * out.t_s;
  return out;
}

}  // namespace nvbath
