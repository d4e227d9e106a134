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
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "nvbath/errors.hpp"

namespace nvbath {

template <class Real>
using BasicOperator = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using BasicVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using Operator = BasicOperator<double>;
using CVector = BasicVector<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Tensor product a (x) b in the standard layout (a's index is the slow one).
template <class DerivedA, class DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class Real = double>
BasicOperator<Real> identity(Eigen::Index d) {
  return BasicOperator<Real>::Identity(d, d);
}

/// |i><j| in dimension d.
template <class Real = double>
BasicOperator<Real> projector(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  BasicOperator<Real> o = BasicOperator<Real>::Zero(d, d);
  o(i, j) = 1;
  return o;
}

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& o, double rel_tol = 1e-12) {
  if (o.rows() != o.cols()) return false;
  const double scale = o.cwiseAbs().maxCoeff();
  return (o - o.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * std::max(scale, 1e-300);
}

struct SpinSpecies {
  double spin = 0.5;
  std::string label;

  int dim() const { return static_cast<int>(std::lround(2 * spin)) + 1; }
};

inline SpinSpecies carbon13() { return {0.5, "13C"}; }
inline SpinSpecies nitrogen14() { return {1.0, "14N"}; }

template <class Real = double>
struct SpinOps {
  BasicOperator<Real> z, plus, minus;
};

/// Spin matrices in the basis m = s, s-1, ..., -s.
template <class Real = double>
SpinOps<Real> spin_ops(const SpinSpecies& s) {
  if (s.spin != 0.5 && s.spin != 1.0)
    throw InvalidArgument("unsupported spin value " + std::to_string(s.spin));
  const int d = s.dim();
  SpinOps<Real> ops{BasicOperator<Real>::Zero(d, d), BasicOperator<Real>::Zero(d, d),
                    BasicOperator<Real>::Zero(d, d)};
  for (int k = 0; k < d; ++k) {
    const Real m = static_cast<Real>(s.spin) - k;
    ops.z(k, k) = m;
    if (k > 0) ops.plus(k - 1, k) = std::sqrt(static_cast<Real>(s.spin * (s.spin + 1)) - m * (m + 1));
  }
  ops.minus = ops.plus.adjoint();
  return ops;
}

/// Orthonormal right-handed triad (e_X, e_Y, e_Z).
struct Frame {
  Vec3 x, y, z;

  CVec3 plus() const { return x.cast<cplx>() + cplx(0, 1) * y.cast<cplx>(); }
  CVec3 minus() const { return x.cast<cplx>() - cplx(0, 1) * y.cast<cplx>(); }
};

inline Frame local_frame(const Vec3& b) {
  const double n = b.norm();
  if (!(n > 0)) throw InvalidArgument("local_frame: zero quantization vector");
  Frame f;
  f.z = b / n;
  const Vec3 c = Vec3::UnitZ().cross(f.z);
  f.x = c.norm() < 1e-8 ? Vec3::UnitX() : Vec3(c.normalized());
  f.x = (f.x - f.x.dot(f.z) * f.z).normalized();
  f.y = f.z.cross(f.x);
  return f;
}

/// Hyperfine tensor with its local frame, e_Z parallel to A^T e_z.
struct HyperfineTensor {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Frame frame;

  /// Bilinear component u . A . v without conjugation.
  template <class U, class V>
  cplx component(const U& u, const V& v) const {
    return (u.template cast<cplx>().transpose() * a.cast<cplx>() * v.template cast<cplx>())(0, 0);
  }
  /// Longitudinal coupling a_n = |A^T e_z|.
  double longitudinal() const { return (a.transpose() * Vec3::UnitZ()).norm(); }
};

inline HyperfineTensor make_hyperfine(const Eigen::Matrix3d& a, const Vec3& axis = Vec3::UnitZ()) {
  HyperfineTensor t;
  t.a = a;
  const Vec3 b = a.transpose() * axis;
  t.frame = b.norm() > 0 ? local_frame(b) : local_frame(axis);
  return t;
}

}  // namespace nvbath
