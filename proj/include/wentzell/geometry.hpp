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

#include "wentzell/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace wentzell {

/// Conforming triangulation of a planar polygonal domain.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles; // counter-clockwise
  std::vector<double> areas;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double total_area() const;
  /// Longest edge over all triangles.
  double max_edge() const;
  std::array<Vec2, 3> corners(std::size_t tri) const;
};

/// Boundary of a Mesh as a closed polyline carrying the d-measure mu
/// (arc length for d = 1), lumped to the boundary nodes.
struct BoundaryMesh {
  std::vector<std::array<int, 2>> segments; // mesh vertex indices, ordered along the loop
  std::vector<int> nodes;                   // boundary vertices in loop order
  std::vector<double> mu;                   // size num_vertices(); zero off the boundary
  std::vector<int> local_index;             // mesh vertex -> position in `nodes`, or -1
  double d = 1.0;

  double total_measure() const;
  double segment_length(const Mesh &mesh, std::size_t seg) const;
  bool on_boundary(int v) const { return local_index[v] >= 0; }
};

/// Lumped weights of dm = dLambda_N + dmu at the mesh vertices.
struct MeasureM {
  Vector interior; // Lebesgue part, one third of adjacent triangle areas
  Vector boundary; // mu part, nonzero exactly on boundary nodes

  Vector combined() const { return interior + boundary; }
};

/// Nested axis-aligned squares (delta_n, 1 - delta_n)^2 exhausting the unit square.
struct PrefractalFamily {
  std::vector<double> deltas;
  std::vector<Mesh> meshes;
};

/// Structured mesh of [lo, hi]^2 with `cells` cells per side; each cell is
/// split along alternating diagonals (criss-cross pattern).
Mesh build_square_mesh(double lo, double hi, int cells);

/// Unit square with mesh size h. Requires 0 < h <= 1 and 1/h integral.
Mesh build_unit_square_mesh(double h);

/// Extracts the boundary loop. Only d = 1 is supported: every boundary
/// built here is a Lipschitz polygon whose natural measure is arc length.
BoundaryMesh extract_boundary(const Mesh &mesh, double d = 1.0);

MeasureM lumped_measure(const Mesh &mesh, const BoundaryMesh &boundary);

/// mu(B(x, r) ∩ boundary) computed exactly by clipping every segment against the disk.
double boundary_ball_measure(const Mesh &mesh, const BoundaryMesh &boundary, Vec2 x, double r);

struct DSetEstimate {
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

/// Sweeps centres over boundary nodes and segment midpoints and the given
/// radii; returns inf and sup of mu(B(x,r) ∩ ∂Ω) / r^d. Radii below the
/// boundary resolution are skipped with a warning.
DSetEstimate verify_dset(const Mesh &mesh, const BoundaryMesh &boundary, double d,
                         const std::vector<double> &radii);

/// delta_n = 2^{-n-1}, n = 1..n_max; each square meshed with `cells` cells per side.
PrefractalFamily build_prefractal_sequence(int n_max, int cells = 8);

/// Throws StructuralError unless every vertex of family.meshes[n] lies in
/// the closed square of family.meshes[n+1] and areas increase strictly.
void check_prefractal_nesting(const PrefractalFamily &family);

/// Plain-text node/element tables. Columns:
///   vertices <count>    then  <index> <x> <y>
///   triangles <count>   then  <index> <v0> <v1> <v2>
void write_mesh(std::ostream &os, const Mesh &mesh);
Mesh read_mesh(std::istream &is);

} // namespace wentzell
