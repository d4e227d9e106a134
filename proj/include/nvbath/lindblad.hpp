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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvbath/errors.hpp"
#include "nvbath/expm.hpp"
#include "nvbath/operator.hpp"

namespace nvbath {

/// Incoherent jump |to><from| at rate gamma (1/us).
struct Jump {
  int from = 0;
  int to = 0;
  double rate = 0;
};

/// General collapse operator with rate.
struct JumpOperator {
  Operator op;
  double rate = 0;
};

/// Electron Hamiltonian plus Lindblad channels.
struct LindbladModel {
  Operator hamiltonian;
  std::vector<Jump> jumps;
  std::vector<double> pure_dephasing;  // per level, empty means none
  std::vector<JumpOperator> operator_jumps;

  Eigen::Index dim() const { return hamiltonian.rows(); }

  void validate() const {
    const auto d = dim();
    if (d < 1 || hamiltonian.cols() != d) throw DimensionMismatch("hamiltonian is not square");
    const double scale = hamiltonian.cwiseAbs().maxCoeff();
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
      throw InvalidArgument("hamiltonian is not Hermitian");
    for (const auto& j : jumps) {
      if (j.from < 0 || j.to < 0 || j.from >= d || j.to >= d)
        throw DimensionMismatch("jump level index out of range");
      if (!(j.rate >= 0) || !std::isfinite(j.rate))
        throw NegativeRate("jump " + std::to_string(j.from) + "->" + std::to_string(j.to));
    }
    if (!pure_dephasing.empty() && static_cast<Eigen::Index>(pure_dephasing.size()) != d)
      throw DimensionMismatch("pure dephasing table size");
    for (double g : pure_dephasing)
      if (!(g >= 0) || !std::isfinite(g)) throw NegativeRate("pure dephasing rate");
    for (const auto& j : operator_jumps) {
      if (j.op.rows() != d || j.op.cols() != d) throw DimensionMismatch("jump operator");
      if (!(j.rate >= 0) || !std::isfinite(j.rate)) throw NegativeRate("jump operator rate");
    }
  }
};

/// Generator acting on column-stacked operators.
struct Superoperator {
  Eigen::Index d = 0;
  Operator m;

  Superoperator shifted(cplx s) const {
    Superoperator out{d, m};
    out.m.diagonal().array() += s;
    return out;
  }
};

inline CVector vec(const Operator& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

inline Operator unvec(const CVector& v, Eigen::Index d) {
  if (v.size() != d * d) throw DimensionMismatch("unvec size");
  return Eigen::Map<const Operator>(v.data(), d, d);
}

namespace detail {

inline void add_dissipator(Operator& l, Eigen::Index d, int from, int to, double rate) {
  if (rate == 0) return;
  // J rho J^dag with J = |to><from|
  l(to * d + to, from * d + from) += rate;
  // -1/2 {J^dag J, rho}, J^dag J = |from><from|
  for (Eigen::Index k = 0; k < d; ++k) {
    l(k * d + from, k * d + from) -= 0.5 * rate;
    l(from * d + k, from * d + k) -= 0.5 * rate;
  }
}

inline void add_dissipator(Operator& l, const Operator& j, double rate) {
  if (rate == 0) return;
  const auto d = j.rows();
  const Operator id = Operator::Identity(d, d);
  const Operator jj = j.adjoint() * j;
  l += rate * (kron(Operator(j.conjugate()), j) - 0.5 * kron(id, jj) - 0.5 * kron(Operator(jj.transpose()), id));
}

inline void add_commutator(Operator& l, const Operator& h, cplx factor) {
  const auto d = h.rows();
  const Operator id = Operator::Identity(d, d);
  l += factor * (kron(id, h) - kron(Operator(h.transpose()), id));
}

}  // namespace detail

/// -i[H + extra, .] + sum_j gamma_j D[|f><i|] + sum_i gamma_phi,i D[|i><i|]
inline Superoperator build_liouvillian(const LindbladModel& model,
                                       const std::optional<Operator>& extra = std::nullopt) {
  model.validate();
  const auto d = model.dim();
  Operator h = model.hamiltonian;
  if (extra) {
    if (extra->rows() != d || extra->cols() != d) throw DimensionMismatch("extra Hamiltonian");
    h += *extra;
  }
  Superoperator s{d, Operator::Zero(d * d, d * d)};
  detail::add_commutator(s.m, h, cplx(0, -1));
  for (const auto& j : model.jumps) detail::add_dissipator(s.m, d, j.from, j.to, j.rate);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(model.pure_dephasing.size()); ++i)
    detail::add_dissipator(s.m, d, static_cast<int>(i), static_cast<int>(i), model.pure_dephasing[i]);
  for (const auto& j : model.operator_jumps) detail::add_dissipator(s.m, j.op, j.rate);
  return s;
}

/// Adds -i{., dK}/2 to the generator.
inline Superoperator build_liouvillian_total(const LindbladModel& model, const Operator& dk) {
  Superoperator s = build_liouvillian(model);
  const auto d = s.d;
  if (dk.rows() != d || dk.cols() != d) throw DimensionMismatch("dK");
  const Operator id = Operator::Identity(d, d);
  s.m += cplx(0, -0.5) * (kron(id, dk) + kron(Operator(dk.transpose()), id));
  return s;
}

struct SteadyStateInfo {
  Operator state;
  double gap_ratio = 0;  // second-smallest over largest singular value
  double residual = 0;   // |L vec(P)|
  double norm = 0;       // largest singular value of L
};

inline SteadyStateInfo steady_state_info(const Superoperator& l) {
  const auto n = l.m.rows();
  Eigen::BDCSVD<Operator> svd(l.m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  SteadyStateInfo info;
  info.norm = sv(0);
  info.gap_ratio = n > 1 ? (sv(0) > 0 ? sv(n - 2) / sv(0) : 0.0) : 1.0;
  if (n > 1 && info.gap_ratio < 1e-8)
    throw DegenerateSteadyState("kernel dimension > 1 (gap ratio " + std::to_string(info.gap_ratio) + ")");
  const CVector v = svd.matrixV().col(n - 1);
  Operator p = unvec(v, l.d);
  const cplx tr = p.trace();
  if (std::abs(tr) < 1e-12) throw NoStationaryState("null vector is traceless");
  p /= tr;
  if ((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-8) p = 0.5 * (p + p.adjoint()).eval();
  info.residual = (l.m * vec(p)).norm();
  if (info.residual > 1e-8 * std::max(info.norm, 1.0))
    throw NoStationaryState("residual " + std::to_string(info.residual));
  info.state = std::move(p);
  return info;
}

inline Operator steady_state(const Superoperator& l) { return steady_state_info(l).state; }

/// Factorized (L + i omega)^-1. At omega = 0 the inverse acts on the traceless subspace.
class Resolvent {
 public:
  Resolvent(const Superoperator& l, double omega) : d_(l.d), omega_(omega) {
    Operator m = l.m;
    if (omega == 0) {
      stationary_ = steady_state(l);
      const CVector p = vec(*stationary_);
      for (Eigen::Index k = 0; k < d_; ++k) m.col(k * d_ + k) += p;
    } else {
      m.diagonal().array() += cplx(0, omega);
    }
    lu_.compute(m);
    rcond_ = lu_.rcond();
  }

  double omega() const { return omega_; }
  double condition_estimate() const { return rcond_ > 0 ? 1.0 / rcond_ : INFINITY; }
  const std::optional<Operator>& stationary() const { return stationary_; }

  Operator apply(const Operator& x) const {
    if (x.rows() != d_ || x.cols() != d_) throw DimensionMismatch("resolvent operand");
    const double overlap = std::abs(x.trace());
    const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
    if (omega_ == 0 && overlap > 1e-10 * scale)
      throw SingularResolvent("operand overlaps the stationary mode at omega = 0");
    if (omega_ != 0 && condition_estimate() > 1e10 && overlap > 1e-10 * scale)
      throw SingularResolvent("ill-conditioned shift with stationary overlap");
    return unvec(lu_.solve(vec(x)), d_);
  }

 private:
  Eigen::Index d_;
  double omega_;
  std::optional<Operator> stationary_;
  Eigen::PartialPivLU<Operator> lu_;
  double rcond_ = 0;
};

inline Operator apply_resolvent(const Superoperator& l, double omega, const Operator& x) {
  return Resolvent(l, omega).apply(x);
}

/// exp(L t) rho0.
inline Operator propagate(const Superoperator& l, const Operator& rho0, double t) {
  if (rho0.rows() != l.d || rho0.cols() != l.d) throw DimensionMismatch("propagate");
  if (!(t >= 0)) throw InvalidArgument("negative time");
  if (t == 0) return rho0;
  const Operator e = expm(Operator(l.m * t));
  return unvec(e * vec(rho0), l.d);
}

}  // namespace nvbath
