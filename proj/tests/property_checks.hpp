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

#include <algorithm>
#include <cmath>
#include <random>

#include "nvbath/lindblad.hpp"
#include "support.hpp"

namespace testsupport {

struct EngineMetrics {
  double trace_error = 0;        // |Tr propagate - 1|
  double min_eigenvalue = 0;     // of the propagated state
  double max_real_eig = 0;       // spectral dissipativity
  double steady_residual = 0;    // |L vec P| / |L|
  double resolvent_residual = 0; // |(L + i w) Y - X| / |X|
  double integral_mismatch = 0;  // relative, quadrature vs resolvent
};

/// -int_0^T e^{(L + i w) t} X dt by composite five-point Gauss-Legendre quadrature.
inline Operator resolvent_by_quadrature(const Superoperator& l, double w, const Operator& x, double t_end,
                                        int panels) {
  static const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
  static const double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};
  const Operator m = l.shifted(cplx(0, w)).m;
  const double h = t_end / panels;
  Operator at_node[5];
  for (int j = 0; j < 5; ++j) at_node[j] = expm(Operator(m * (0.5 * h * (nodes[j] + 1))));
  const Operator step = expm(Operator(m * h));
  CVector start = vec(x);
  CVector acc = CVector::Zero(start.size());
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < 5; ++j) acc += 0.5 * h * weights[j] * (at_node[j] * start);
    start = step * start;
  }
  return unvec(-acc, l.d);
}

inline EngineMetrics engine_metrics(std::mt19937& rng, Eigen::Index d) {
  EngineMetrics e;
  const LindbladModel model = random_model(rng, d);
  const Superoperator l = build_liouvillian(model);
  std::uniform_real_distribution<double> u(-4, 4), tu(0.05, 5);

  const Operator rho = propagate(l, random_density(rng, d), tu(rng));
  e.trace_error = std::abs(rho.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()));
  e.min_eigenvalue = es.eigenvalues().minCoeff();

  Eigen::ComplexEigenSolver<Operator> ces(l.m);
  e.max_real_eig = ces.eigenvalues().real().maxCoeff();
  double slowest = INFINITY, fastest = 0;
  for (const auto& ev : ces.eigenvalues()) {
    if (std::abs(ev) > 1e-9) slowest = std::min(slowest, std::abs(ev.real()));
    fastest = std::max(fastest, std::abs(ev));
  }

  const auto info = steady_state_info(l);
  e.steady_residual = info.residual / info.norm;

  const double w = u(rng);
  const Operator x = random_matrix(rng, d);
  const Operator y = apply_resolvent(l, w, x);
  e.resolvent_residual = (unvec(l.m * vec(y), d) + cplx(0, w) * y - x).norm() / x.norm();

  Operator xt = x - x.trace() / static_cast<double>(d) * Operator::Identity(d, d);
  const Operator yt = apply_resolvent(l, w, xt);
  const double t_end = 40.0 / slowest;
  const int panels = static_cast<int>(std::ceil(t_end * (fastest + std::abs(w)) / 1.5)) + 1;
  const Operator yq = resolvent_by_quadrature(l, w, xt, t_end, panels);
  e.integral_mismatch = (yq - yt).norm() / yt.norm();
  return e;
}

}  // namespace testsupport
