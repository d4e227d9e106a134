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

#include <Eigen/Dense>

namespace nvbath {

namespace detail {

template <class Real>
struct Pade13 {
  static constexpr Real b[14] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,       1323241920.,
                                 40840800.,          960960.,            16380.,
                                 182.,               1.};
  static constexpr Real theta = 5.371920351148152;
};

}  // namespace detail

/// Matrix exponential by scaling and squaring with a degree 13 Pade approximant.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto& b = detail::Pade13<Real>::b;

  Mat a = a_in;
  const Eigen::Index n = a.rows();
  const Real norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > detail::Pade13<Real>::theta) {
    s = static_cast<int>(std::ceil(std::log2(norm1 / detail::Pade13<Real>::theta)));
    a /= std::ldexp(Real(1), s);
  }
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u.noalias() += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * u;
  Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v.noalias() += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

}  // namespace nvbath
