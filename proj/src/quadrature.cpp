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

#include "wentzell/quadrature.hpp"

#include "wentzell/error.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace wentzell::quad {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^a (1+x)^b on [-1, 1].
void golub_welsch_jacobi(int n, double a, double b, std::vector<double> &nodes,
                         std::vector<double> &weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    double alpha;
    if (k == 0)
      alpha = (b - a) / (ab + 2.0);
    else
      alpha = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    J(k, k) = alpha;
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double num = 4.0 * m * (m + a) * (m + b) * (m + ab);
      const double den =
          (2.0 * m + ab) * (2.0 * m + ab) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0);
      const double off = std::sqrt(num / den);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

} // namespace

Rule1D gauss_jacobi01(int n, double beta) {
  if (n < 1)
    throw InvalidInput("Gauss-Jacobi rule needs at least one point");
  if (!(beta > -1.0))
    throw InvalidInput("Gauss-Jacobi weight exponent must exceed -1");

  static std::mutex cache_mutex;
  static std::map<std::pair<int, double>, Rule1D> cache;
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache.find({n, beta});
    if (it != cache.end())
      return it->second;
  }

  std::vector<double> xi, wi;
  golub_welsch_jacobi(n, 0.0, beta, xi, wi);
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  const double scale = std::pow(2.0, -beta - 1.0);
  for (int i = 0; i < n; ++i) {
    r.x[i] = 0.5 * (1.0 + xi[i]);
    r.w[i] = scale * wi[i];
  }
  std::lock_guard lock(cache_mutex);
  cache.emplace(std::pair{n, beta}, r);
  return r;
}

Rule1D gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0); }

TriangleRule collapsed_triangle(int n) {
  // xi1 = u, xi2 = v (1 - u); the Jacobian (1 - u) is absorbed into a
  // Gauss-Jacobi rule in u with weight (1 - u), i.e. x^1 after u -> 1 - u.
  const Rule1D gu = gauss_jacobi01(n, 1.0);
  const Rule1D gv = gauss_legendre01(n);
  TriangleRule t;
  for (std::size_t i = 0; i < gu.size(); ++i) {
    const double u = 1.0 - gu.x[i];
    for (std::size_t j = 0; j < gv.size(); ++j) {
      t.xi1.push_back(u);
      t.xi2.push_back(gv.x[j] * (1.0 - u));
      t.w.push_back(gu.w[i] * gv.w[j]);
    }
  }
  return t;
}

TriangleRule symmetric_triangle(int degree) {
  TriangleRule t;
  auto add = [&](double a, double b, double w) {
    t.xi1.push_back(a);
    t.xi2.push_back(b);
    t.w.push_back(0.5 * w);
  };
  if (degree <= 1) {
    add(1.0 / 3.0, 1.0 / 3.0, 1.0);
  } else if (degree == 2) {
    add(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0);
    add(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
    add(1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0);
  } else if (degree <= 5) {
    const double r15 = std::sqrt(15.0);
    const double a = (6.0 - r15) / 21.0;
    const double b = (6.0 + r15) / 21.0;
    const double wa = (155.0 - r15) / 1200.0;
    const double wb = (155.0 + r15) / 1200.0;
    add(1.0 / 3.0, 1.0 / 3.0, 0.225);
    add(a, a, wa);
    add(1.0 - 2.0 * a, a, wa);
    add(a, 1.0 - 2.0 * a, wa);
    add(b, b, wb);
    add(1.0 - 2.0 * b, b, wb);
    add(b, 1.0 - 2.0 * b, wb);
  } else {
    return collapsed_triangle((degree + 2) / 2);
  }
  return t;
}

Rule1D graded_legendre(double a, double b, int n, int levels, bool grade_left,
                       bool grade_right) {
  std::vector<double> cuts;
  const double len = b - a;
  // breakpoints as fractions of [0, 1]
  std::vector<double> fr{0.0};
  if (grade_left)
    for (int k = levels; k >= 1; --k)
      fr.push_back(0.5 * std::ldexp(1.0, -k));
  if (grade_right) {
    fr.push_back(0.5);
    for (int k = 1; k <= levels; ++k)
      fr.push_back(1.0 - 0.5 * std::ldexp(1.0, -k));
  } else if (grade_left) {
    fr.push_back(0.5);
  }
  fr.push_back(1.0);
  const Rule1D g = gauss_legendre01(n);
  Rule1D r;
  for (std::size_t c = 0; c + 1 < fr.size(); ++c) {
    const double lo = a + len * fr[c];
    const double hi = a + len * fr[c + 1];
    if (hi <= lo)
      continue;
    for (std::size_t i = 0; i < g.size(); ++i) {
      r.x.push_back(lo + (hi - lo) * g.x[i]);
      r.w.push_back((hi - lo) * g.w[i]);
    }
  }
  return r;
}

} // namespace wentzell::quad
