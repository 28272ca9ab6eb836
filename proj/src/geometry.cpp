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

#include "wentzell/geometry.hpp"

#include "wentzell/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace wentzell {

double Mesh::total_area() const {
  double a = 0.0;
  for (double x : areas)
    a += x;
  return a;
}

double Mesh::max_edge() const {
  double h = 0.0;
  for (const auto &t : triangles)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, norm(vertices[t[(k + 1) % 3]] - vertices[t[k]]));
  return h;
}

std::array<Vec2, 3> Mesh::corners(std::size_t tri) const {
  const auto &t = triangles[tri];
  return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
}

double BoundaryMesh::total_measure() const {
  double s = 0.0;
  for (int v : nodes)
    s += mu[v];
  return s;
}

double BoundaryMesh::segment_length(const Mesh &mesh, std::size_t seg) const {
  return norm(mesh.vertices[segments[seg][1]] - mesh.vertices[segments[seg][0]]);
}

Mesh build_square_mesh(double lo, double hi, int cells) {
  if (cells < 1 || !(hi > lo))
    throw InvalidInput("square mesh needs hi > lo and at least one cell");
  Mesh m;
  const int n = cells;
  const double h = (hi - lo) / n;
  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.push_back({i == n ? hi : lo + i * h, j == n ? hi : lo + j * h});
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  }
  m.areas.reserve(m.triangles.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto p = m.corners(t);
    m.areas.push_back(0.5 * cross(p[1] - p[0], p[2] - p[0]));
  }
  return m;
}

Mesh build_unit_square_mesh(double h) {
  if (!(h > 0.0) || h > 1.0)
    throw InvalidInput("mesh size h must satisfy 0 < h <= 1");
  const double inv = 1.0 / h;
  const double n = std::round(inv);
  if (std::abs(inv - n) > 1e-9 * std::max(1.0, inv))
    throw InvalidInput("1/h must be an integer (got h = " + std::to_string(h) + ")");
  return build_square_mesh(0.0, 1.0, static_cast<int>(n));
}

BoundaryMesh extract_boundary(const Mesh &mesh, double d) {
  if (std::abs(d - 1.0) > 1e-12)
    throw InvalidInput("d-set mismatch: polygonal boundaries carry d = 1 (requested d = " +
                       std::to_string(d) + ")");
  // Count undirected edges and remember the orientation of single-use ones.
  std::map<std::pair<int, int>, int> count;
  std::map<std::pair<int, int>, std::pair<int, int>> oriented;
  for (const auto &t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      const auto key = std::minmax(a, b);
      ++count[key];
      oriented[key] = {a, b};
    }
  }
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<int> next(nv, -1);
  std::size_t n_bdy_edges = 0;
  for (const auto &[key, c] : count) {
    if (c > 2)
      throw StructuralError("non-manifold edge shared by more than two triangles");
    if (c == 1) {
      const auto [a, b] = oriented[key];
      if (next[a] != -1)
        throw StructuralError("boundary vertex with more than one outgoing boundary edge");
      next[a] = b;
      ++n_bdy_edges;
    }
  }
  if (n_bdy_edges == 0)
    throw StructuralError("mesh has no boundary edges");

  BoundaryMesh bm;
  bm.d = d;
  bm.mu.assign(nv, 0.0);
  bm.local_index.assign(nv, -1);
  int start = -1;
  for (int v = 0; v < nv; ++v)
    if (next[v] != -1) {
      start = v;
      break;
    }
  int v = start;
  do {
    const int w = next[v];
    if (w == -1)
      throw StructuralError("boundary is not watertight (open polyline)");
    if (bm.local_index[v] != -1)
      throw StructuralError("boundary loop revisits a vertex");
    bm.local_index[v] = static_cast<int>(bm.nodes.size());
    bm.nodes.push_back(v);
    bm.segments.push_back({v, w});
    v = w;
  } while (v != start && bm.nodes.size() <= n_bdy_edges);
  if (v != start || bm.segments.size() != n_bdy_edges)
    throw StructuralError("boundary edges do not form a single closed loop");

  for (std::size_t s = 0; s < bm.segments.size(); ++s) {
    const double len = bm.segment_length(mesh, s);
    bm.mu[bm.segments[s][0]] += 0.5 * len;
    bm.mu[bm.segments[s][1]] += 0.5 * len;
  }
  return bm;
}

MeasureM lumped_measure(const Mesh &mesh, const BoundaryMesh &boundary) {
  MeasureM m;
  const auto nv = static_cast<Eigen::Index>(mesh.num_vertices());
  m.interior = Vector::Zero(nv);
  m.boundary = Vector::Zero(nv);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles[t])
      m.interior[v] += mesh.areas[t] / 3.0;
  for (int v : boundary.nodes)
    m.boundary[v] = boundary.mu[v];
  return m;
}

double boundary_ball_measure(const Mesh &mesh, const BoundaryMesh &boundary, Vec2 x, double r) {
  double total = 0.0;
  for (const auto &seg : boundary.segments) {
    const Vec2 p = mesh.vertices[seg[0]];
    const Vec2 dvec = mesh.vertices[seg[1]] - p;
    const double a = norm2(dvec);
    const double b = dot(dvec, p - x);
    const double c = norm2(p - x) - r * r;
    const double disc = b * b - a * c;
    if (disc <= 0.0)
      continue;
    const double sq = std::sqrt(disc);
    const double t1 = std::clamp((-b - sq) / a, 0.0, 1.0);
    const double t2 = std::clamp((-b + sq) / a, 0.0, 1.0);
    total += std::max(0.0, t2 - t1) * std::sqrt(a);
  }
  return total;
}

DSetEstimate verify_dset(const Mesh &mesh, const BoundaryMesh &boundary, double d,
                         const std::vector<double> &radii) {
  if (radii.empty())
    throw InvalidInput("d-set sweep needs at least one radius");
  if (std::abs(d - boundary.d) > 1e-12)
    throw InvalidInput("d-set mismatch between requested d and boundary measure");

  double resolution = 0.0;
  for (std::size_t s = 0; s < boundary.segments.size(); ++s)
    resolution = std::max(resolution, boundary.segment_length(mesh, s));
  double diam = 0.0;
  for (int a : boundary.nodes)
    for (int b : boundary.nodes)
      diam = std::max(diam, norm(mesh.vertices[a] - mesh.vertices[b]));

  std::vector<Vec2> centres;
  for (int v : boundary.nodes)
    centres.push_back(mesh.vertices[v]);
  for (const auto &seg : boundary.segments)
    centres.push_back(0.5 * (mesh.vertices[seg[0]] + mesh.vertices[seg[1]]));

  DSetEstimate est;
  est.c1 = std::numeric_limits<double>::infinity();
  est.c2 = 0.0;
  for (double r : radii) {
    if (!(r > 0.0))
      throw InvalidInput("d-set radii must be positive");
    if (r < resolution || r > diam) {
      std::ostringstream w;
      w << "radius " << r << " outside (" << resolution << ", " << diam << "); skipped";
      est.warnings.push_back(w.str());
      continue;
    }
    for (const Vec2 &x : centres) {
      const double ratio = boundary_ball_measure(mesh, boundary, x, r) / std::pow(r, d);
      est.c1 = std::min(est.c1, ratio);
      est.c2 = std::max(est.c2, ratio);
      ++est.samples;
    }
  }
  if (est.samples == 0)
    throw InvalidInput("no admissible radius in d-set sweep");
  return est;
}

PrefractalFamily build_prefractal_sequence(int n_max, int cells) {
  if (n_max < 1)
    throw InvalidInput("prefractal depth must be at least 1");
  PrefractalFamily f;
  for (int n = 1; n <= n_max; ++n) {
    const double delta = std::ldexp(1.0, -n - 1);
    f.deltas.push_back(delta);
    f.meshes.push_back(build_square_mesh(delta, 1.0 - delta, cells));
  }
  check_prefractal_nesting(f);
  return f;
}

void check_prefractal_nesting(const PrefractalFamily &family) {
  for (std::size_t n = 0; n + 1 < family.meshes.size(); ++n) {
    const double lo = family.deltas[n + 1], hi = 1.0 - family.deltas[n + 1];
    for (const Vec2 &p : family.meshes[n].vertices)
      if (p.x < lo || p.x > hi || p.y < lo || p.y > hi)
        throw StructuralError("prefractal domains are not nested");
    if (!(family.meshes[n + 1].total_area() > family.meshes[n].total_area()))
      throw StructuralError("prefractal areas are not strictly increasing");
  }
}

void write_mesh(std::ostream &os, const Mesh &mesh) {
  os << std::setprecision(17);
  os << "vertices " << mesh.vertices.size() << '\n';
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << i << ' ' << mesh.vertices[i].x << ' ' << mesh.vertices[i].y << '\n';
  os << "triangles " << mesh.triangles.size() << '\n';
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto &t = mesh.triangles[i];
    os << i << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

Mesh read_mesh(std::istream &is) {
  Mesh m;
  std::string tag;
  std::size_t count = 0;
  if (!(is >> tag >> count) || tag != "vertices")
    throw InvalidInput("mesh file: expected 'vertices <count>'");
  m.vertices.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx;
    Vec2 p;
    if (!(is >> idx >> p.x >> p.y) || idx >= count)
      throw InvalidInput("mesh file: bad vertex record");
    m.vertices[idx] = p;
  }
  if (!(is >> tag >> count) || tag != "triangles")
    throw InvalidInput("mesh file: expected 'triangles <count>'");
  m.triangles.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx;
    std::array<int, 3> t;
    if (!(is >> idx >> t[0] >> t[1] >> t[2]) || idx >= count)
      throw InvalidInput("mesh file: bad triangle record");
    for (int v : t)
      if (v < 0 || static_cast<std::size_t>(v) >= m.vertices.size())
        throw InvalidInput("mesh file: triangle references unknown vertex");
    m.triangles[idx] = t;
  }
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto p = m.corners(t);
    const double a = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
    if (!(a > 0.0))
      throw StructuralError("mesh file: triangle with non-positive area");
    m.areas.push_back(a);
  }
  return m;
}

} // namespace wentzell
