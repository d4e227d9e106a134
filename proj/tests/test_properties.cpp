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

#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "nvbath/rates.hpp"
#include "property_checks.hpp"
#include "support.hpp"

using namespace nvbath;
using namespace testsupport;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("engine invariants on random models", "[property]") {
  std::mt19937 rng(1234);
  for (int k = 0; k < 200; ++k) {
    const auto d = 2 + k % 4;
    const EngineMetrics e = engine_metrics(rng, d);
    INFO("case " << k << " dim " << d);
    CHECK(e.trace_error <= 1e-10);
    CHECK(e.min_eigenvalue >= -1e-10);
    CHECK(e.max_real_eig <= 1e-10);
    CHECK(e.steady_residual <= 1e-10);
    CHECK(e.resolvent_residual <= 1e-10);
    CHECK(e.integral_mismatch <= 1e-6);
  }
}

TEST_CASE("steady states are physical density matrices", "[property]") {
  std::mt19937 rng(77);
  for (int k = 0; k < 100; ++k) {
    const auto d = 2 + k % 5;
    const Operator p = steady_state(build_liouvillian(random_model(rng, d)));
    CHECK_THAT(p.trace().real(), WithinAbs(1.0, 1e-12));
    CHECK(is_hermitian(p, 1e-12));
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (p + p.adjoint()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("exact transition rate equals its time integral", "[property]") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  for (int k = 0; k < 50; ++k) {
    const auto d = 2 + k % 3;
    const Superoperator l = build_liouvillian(random_model(rng, d));
    const Operator p = steady_state(l);
    const Operator f = random_matrix(rng, d);
    const double w = (k % 2 ? 1 : -1) * u(rng);
    const Operator x = f * p;
    const cplx tr = x.trace();
    const Operator xt = x - tr * p;
    Eigen::ComplexEigenSolver<Operator> ces(l.m);
    double slowest = INFINITY, fastest = 0;
    for (const auto& ev : ces.eigenvalues()) {
      if (std::abs(ev) > 1e-9) slowest = std::min(slowest, std::abs(ev.real()));
      fastest = std::max(fastest, std::abs(ev));
    }
    const double t_end = 40.0 / slowest;
    const int panels = static_cast<int>(std::ceil(t_end * (fastest + std::abs(w)) / 1.5)) + 1;
    const Operator integral = -resolvent_by_quadrature(l, w, xt, t_end, panels) - tr * p / cplx(0, w);
    const double by_time = 2 * (f.adjoint() * integral).trace().real();
    const double exact = transition_rate_exact(f, p, Resolvent(l, w));
    CHECK_THAT(exact, WithinRel(by_time, 1e-6));
    CHECK(exact >= 0);
  }
}

TEST_CASE("dephasing rate scaling and positivity", "[property]") {
  std::mt19937 rng(2718);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 60; ++k) {
    const auto d = 2 + k % 4;
    const Superoperator l = build_liouvillian(random_model(rng, d));
    const Resolvent r0(l, 0.0);
    const Operator dk = random_hermitian(rng, d);
    const double g = dephasing_rate(dk, r0);
    CHECK(g >= 0);
    CHECK_THAT(dephasing_rate(2.0 * dk, r0), WithinRel(4 * g, 1e-10));
    const double c = u(rng);
    CHECK_THAT(dephasing_rate(dk + c * Operator::Identity(d, d), r0), WithinRel(g, 1e-9));
    CHECK(dephasing_rate(c * Operator::Identity(d, d), r0) == 0.0);
  }
}

TEST_CASE("subtracted rate form reduces to the exact rate for off-diagonal channels", "[property]") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int k = 0; k < 40; ++k) {
    const auto d = 3 + k % 2;
    const auto l = std::make_shared<const Superoperator>(build_liouvillian(random_model(rng, d)));
    const Operator p = steady_state(*l);
    Operator f = random_matrix(rng, d);
    f -= (f * p).trace() * Operator::Identity(d, d);
    const TransitionChannel ch{f, u(rng), l, p};
    CHECK_THAT(transition_rate_full(ch), WithinRel(transition_rate_exact(ch), 1e-10));
  }
}
