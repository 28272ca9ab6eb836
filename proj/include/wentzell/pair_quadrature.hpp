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

#include "wentzell/quadrature.hpp"
#include "wentzell/types.hpp"

#include <array>
#include <vector>

namespace wentzell::pairq {

/// Quadrature node for a pair of triangles. bx, by are barycentric
/// coordinates in the corner order passed in; w already contains the
/// kernel factor |x - y|^{-sigma} and every Jacobian.
struct PairPoint {
  std::array<double, 3> bx;
  std::array<double, 3> by;
  double w;
};

using Tri = std::array<Vec2, 3>;

/// x, y in the same triangle.
std::vector<PairPoint> identical(const Tri &T, double sigma, int n);

/// T1[0] == T2[0] and T1[1] == T2[1] (shared edge).
std::vector<PairPoint> common_edge(const Tri &T1, const Tri &T2, double sigma, int n);

/// T1[0] == T2[0] only (shared vertex).
std::vector<PairPoint> common_vertex(const Tri &T1, const Tri &T2, double sigma, int n);

/// Tensor product of two triangle rules; no singularity treatment.
std::vector<PairPoint> tensor(const Tri &T1, const Tri &T2, double sigma,
                              const quad::TriangleRule &r1, const quad::TriangleRule &r2);

/// Node for a pair of boundary segments; a, b are the parameters along the
/// segments (0 at the first endpoint passed in).
struct SegPoint {
  double a;
  double b;
  double w;
};

std::vector<SegPoint> segment_identical(Vec2 P, Vec2 Q, double sigma, int n);

/// Both segments start at the shared vertex V and end at A and B.
std::vector<SegPoint> segment_adjacent(Vec2 V, Vec2 A, Vec2 B, double sigma, int n);

std::vector<SegPoint> segment_tensor(Vec2 P1, Vec2 Q1, Vec2 P2, Vec2 Q2, double sigma,
                                     const quad::Rule1D &r);

} // namespace wentzell::pairq
