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

#include <random>

#include "nvbath/lindblad.hpp"

namespace testsupport {

using namespace nvbath;

inline Operator random_matrix(std::mt19937& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Operator m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

inline Operator random_hermitian(std::mt19937& rng, Eigen::Index d, double scale = 1.0) {
  const Operator m = random_matrix(rng, d, scale);
  return 0.5 * (m + m.adjoint());
}

inline Operator random_density(std::mt19937& rng, Eigen::Index d) {
  const Operator m = random_matrix(rng, d);
  Operator r = m * m.adjoint();
  return r / r.trace();
}

/// Random model with every level decaying into its neighbour ring so the steady state is unique.
inline LindbladModel random_model(std::mt19937& rng, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  LindbladModel m;
  m.hamiltonian = random_hermitian(rng, d);
  for (int i = 0; i < d; ++i) {
    m.jumps.push_back({i, static_cast<int>((i + 1) % d), u(rng)});
    if (u(rng) > 1.0) m.jumps.push_back({i, static_cast<int>((i + d - 1) % d), u(rng)});
  }
  m.pure_dephasing.resize(d);
  for (auto& g : m.pure_dephasing) g = u(rng) - 0.2;
  return m;
}

}  // namespace testsupport
