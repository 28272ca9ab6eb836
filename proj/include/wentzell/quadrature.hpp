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

#pragma once

#include <vector>

namespace wentzell::quad {

/// One-dimensional rule on [0, 1]: sum_i w_i f(x_i) approximates
/// \int_0^1 x^beta f(x) dx (beta = 0 for plain Gauss-Legendre).
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// Rule on the reference triangle {xi1, xi2 >= 0, xi1 + xi2 <= 1}; the
/// weights sum to the reference area 1/2.
struct TriangleRule {
  std::vector<double> xi1;
  std::vector<double> xi2;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

/// n-point Gauss-Jacobi rule for the weight x^beta on [0, 1], beta > -1.
/// Exact for polynomials of degree 2n - 1 against that weight.
Rule1D gauss_jacobi01(int n, double beta);

/// n-point Gauss-Legendre rule on [0, 1].
Rule1D gauss_legendre01(int n);

/// Collapsed (Duffy) tensor rule with n x n points, exact to degree 2n - 1.
TriangleRule collapsed_triangle(int n);

/// Symmetric rules: degree 1 (centroid), 2 (three interior points),
/// 5 (seven-point Radon rule). Other degrees fall back to collapsed rules.
TriangleRule symmetric_triangle(int degree);

/// Composite Gauss-Legendre on [a, b] with cells refined geometrically
/// towards both ends (ratio 1/2, `levels` levels per end) and `n` points per
/// cell. Used for integrands with mild endpoint singularities.
Rule1D graded_legendre(double a, double b, int n, int levels, bool grade_left = true,
                       bool grade_right = true);

} // namespace wentzell::quad
