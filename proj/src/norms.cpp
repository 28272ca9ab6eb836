// Copyright 2026 The wentzell authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "wentzell/norms.hpp"

#include <cmath>
#include <limits>

namespace wentzell {

double lp_norm(const Vector &u, const Vector &m, double p) {
  if (std::isinf(p))
    return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  if (p == 1.0)
    return (m.array() * u.array().abs()).sum();
  if (p == 2.0)
    return std::sqrt((m.array() * u.array().square()).sum());
  return std::pow((m.array() * u.array().abs().pow(p)).sum(), 1.0 / p);
}

double op_norm_1(const Matrix &U, const Vector &m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    best = std::max(best, (m.array() * U.col(j).array().abs()).sum() / m[j]);
  return best;
}

double op_norm_inf(const Matrix &U) { return U.cwiseAbs().rowwise().sum().maxCoeff(); }

double op_norm_2(const Matrix &U, const Vector &m, int iterations) {
  const Vector sq = m.cwiseSqrt();
  const Matrix B = sq.asDiagonal() * U * sq.cwiseInverse().asDiagonal();
  Vector x = Vector::Ones(U.cols()).normalized();
  double sigma2 = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector y = B.transpose() * (B * x);
    const double nrm = y.norm();
    if (nrm == 0.0)
      return 0.0;
    const double prev = sigma2;
    sigma2 = x.dot(y);
    x = y / nrm;
    if (k > 5 && std::abs(sigma2 - prev) <= 1e-15 * sigma2)
      break;
  }
  return std::sqrt(std::max(0.0, sigma2));
}

double op_norm_1_inf(const Matrix &U, const Vector &m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    best = std::max(best, U.col(j).cwiseAbs().maxCoeff() / m[j]);
  return best;
}

double op_norm_2_q(const Matrix &U, const Vector &m, double q, int iterations, double tol) {
  // B = diag(m^{1/q}) U diag(m^{-1/2}) between unweighted spaces.
  const Matrix B = m.array().pow(1.0 / q).matrix().asDiagonal() * U *
                   m.cwiseSqrt().cwiseInverse().asDiagonal();
  Vector x = B.transpose() * Vector::Ones(B.rows());
  x = x.cwiseAbs();
  x /= x.norm();
  double val = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const Vector y = B * x;
    const double yq = std::pow(y.array().abs().pow(q).sum(), 1.0 / q);
    const Vector psi = (y.array().sign() * (y.array().abs() / yq).pow(q - 1.0)).matrix();
    Vector xn = B.transpose() * psi;
    const double nx = xn.norm();
    if (nx == 0.0)
      return 0.0;
    xn /= nx;
    const double prev = val;
    val = yq;
    x = xn;
    if (k > 3 && std::abs(val - prev) <= tol * val)
      break;
  }
  const Vector y = B * x;
  return std::pow(y.array().abs().pow(q).sum(), 1.0 / q);
}

} // namespace wentzell
