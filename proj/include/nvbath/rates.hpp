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
#include <memory>
#include <utility>
#include <vector>

#include "nvbath/errors.hpp"
#include "nvbath/lindblad.hpp"
#include "nvbath/operator.hpp"

namespace nvbath {

/// <p|V(t)|m> = F e^{-i omega t} acting on the electron, with the block generator and source state.
struct TransitionChannel {
  Operator flip;
  double omega = 0;
  std::shared_ptr<const Superoperator> generator;
  Operator source_state;
};

inline constexpr double kRateClampTolerance = 1e-10;

/// Clamps round-off negatives to zero and rejects genuine negative rates.
inline double clamp_rate(double w, double scale = 1.0) {
  if (w >= 0) return w;
  if (w > -kRateClampTolerance * std::max(scale, 1.0)) return 0.0;
  throw NegativeRate("rate " + std::to_string(w));
}

/// W = -2 Re Tr F^dag (L + i omega)^-1 (F P)
inline double transition_rate_exact(const Operator& f, const Operator& p, const Resolvent& r) {
  const Operator y = r.apply(f * p);
  const double w = -2.0 * (f.adjoint() * y).trace().real();
  return clamp_rate(w, f.squaredNorm());
}

inline double transition_rate_exact(const TransitionChannel& ch) {
  if (!ch.generator) throw InvalidArgument("channel without generator");
  if (ch.flip.norm() == 0) return 0.0;
  return transition_rate_exact(ch.flip, ch.source_state, Resolvent(*ch.generator, ch.omega));
}

/// Subtracted form -2 Re Tr F^dag (L + i omega)^-1 (F P - <F> P).
inline double transition_rate_full(const TransitionChannel& ch) {
  const cplx mean = (ch.flip * ch.source_state).trace();
  const double scale = std::max(ch.flip.cwiseAbs().maxCoeff(), 1e-300);
  if (ch.omega == 0 && std::abs(mean) > 1e-10 * scale)
    throw SingularResolvent("omega = 0 with nonzero <V>");
  const double w = transition_rate_exact(ch);
  if (std::abs(mean) == 0) return w;
  const cplx back = (ch.flip.adjoint() * ch.source_state).trace();
  return w + 2.0 / ch.omega * (mean * back).imag();
}

/// Pure dephasing Re int_0^inf Tr dK~ e^{Lt} dK~ P dt via the projected inverse.
inline double dephasing_rate(const Operator& dk, const Resolvent& r0) {
  if (r0.omega() != 0 || !r0.stationary()) throw InvalidArgument("dephasing_rate needs the omega = 0 resolvent");
  const Operator& p = *r0.stationary();
  if (dk.rows() != p.rows()) throw DimensionMismatch("dK");
  const auto d = dk.rows();
  const Operator centered = dk - (dk * p).trace() * Operator::Identity(d, d);
  if (centered.norm() <= 1e-13 * dk.norm()) return 0.0;
  const Operator y = r0.apply(centered * p);
  const double g = -(centered * y).trace().real();
  return clamp_rate(g, centered.squaredNorm());
}

inline double dephasing_rate(const Operator& dk, const Superoperator& l) {
  return dephasing_rate(dk, Resolvent(l, 0.0));
}

/// Gamma_phi + (1/2) sum of channel rates.
inline double coherence_decay(const std::vector<TransitionChannel>& channels, double gamma_phi) {
  double total = gamma_phi;
  for (const auto& ch : channels) total += 0.5 * transition_rate_exact(ch);
  return total;
}

/// Complex energy mismatch data.
struct MismatchTable {
  Eigen::VectorXd energy;
  Eigen::VectorXd total_decay;
  Eigen::VectorXd self_rate;

  cplx z(Eigen::Index k, Eigen::Index j, double omega) const {
    const double width = total_decay(k) + total_decay(j) - (k == j ? 2.0 * self_rate(k) : 0.0);
    return {energy(k) - energy(j) - omega, -0.5 * width};
  }
};

inline MismatchTable mismatch_table(const LindbladModel& m) {
  const auto d = m.dim();
  MismatchTable t{m.hamiltonian.diagonal().real(), Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  for (const auto& j : m.jumps) {
    t.total_decay(j.from) += j.rate;
    if (j.from == j.to) t.self_rate(j.from) += j.rate;
  }
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m.pure_dephasing.size()); ++i) {
    t.total_decay(i) += m.pure_dephasing[i];
    t.self_rate(i) += m.pure_dephasing[i];
  }
  return t;
}

/// 2 sum Im[V*_{f,i'} V_{f,i} P_{i,i'} / z_{f,i'}]
inline double rate_golden(const Operator& v, const MismatchTable& t, double omega, const Operator& p) {
  const auto d = v.rows();
  double acc = 0;
  for (Eigen::Index f = 0; f < d; ++f)
    for (Eigen::Index i = 0; i < d; ++i) {
      if (v(f, i) == 0.0) continue;
      for (Eigen::Index ip = 0; ip < d; ++ip) {
        if (v(f, ip) == 0.0 || p(i, ip) == 0.0) continue;
        acc += (std::conj(v(f, ip)) * v(f, i) * p(i, ip) / t.z(f, ip, omega)).imag();
      }
    }
  return 2.0 * acc;
}

/// 2 Im sum (H_{i'f'} V*_{ff'}/z_{ff'} - V*_{f'i'} H_{f'f}/z_{f'i'}) V_{fi} P_{ii'} / z_{fi'}
inline double rate_coherent(const Operator& v, const Operator& h_nd, const MismatchTable& t, double omega,
                            const Operator& p) {
  const auto d = v.rows();
  cplx acc = 0;
  for (Eigen::Index f = 0; f < d; ++f)
    for (Eigen::Index i = 0; i < d; ++i) {
      if (v(f, i) == 0.0) continue;
      for (Eigen::Index ip = 0; ip < d; ++ip) {
        if (p(i, ip) == 0.0) continue;
        cplx inner = 0;
        for (Eigen::Index fp = 0; fp < d; ++fp) {
          if (h_nd(ip, fp) != 0.0 && v(f, fp) != 0.0) inner += h_nd(ip, fp) * std::conj(v(f, fp)) / t.z(f, fp, omega);
          if (v(fp, ip) != 0.0 && h_nd(fp, f) != 0.0) inner -= std::conj(v(fp, ip)) * h_nd(fp, f) / t.z(fp, ip, omega);
        }
        acc += inner * v(f, i) * p(i, ip) / t.z(f, ip, omega);
      }
    }
  return 2.0 * acc.imag();
}

/// F-bar = sum_k Tr(F_k P) a_k - gamma_N B.
inline Vec3 knight_field_average(const std::vector<std::pair<Operator, Vec3>>& components, const Operator& p,
                                 const Vec3& gamma_n_b) {
  Vec3 out = -gamma_n_b;
  for (const auto& [op, a] : components) out += (op * p).trace().real() * a;
  return out;
}

}  // namespace nvbath
