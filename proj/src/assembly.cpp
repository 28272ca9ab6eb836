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

#include "wentzell/assembly.hpp"

#include "wentzell/error.hpp"
#include "wentzell/pair_quadrature.hpp"
#include "wentzell/parallel.hpp"
#include "wentzell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wentzell {

namespace {

struct LocalMatrix {
  int size = 0;
  std::array<double, 36> a{};
};

using CacheKey = std::array<long long, 13>;

unsigned chunk_count(const AssemblyOptions &opt) {
  return opt.deterministic ? std::max(1u, opt.chunks) : thread_budget();
}

// Fixed-order pairwise reduction of per-chunk buffers into buf[0].
void tree_reduce(std::vector<Matrix> &buf) {
  for (std::size_t stride = 1; stride < buf.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < buf.size(); i += 2 * stride)
      buf[i] += buf[i + stride];
}

int shared_count(const std::array<int, 3> &a, const std::array<int, 3> &b) {
  int n = 0;
  for (int x : a)
    for (int y : b)
      n += x == y;
  return n;
}

// Reorders corners so shared vertices come first, in matching order.
void order_shared(const std::array<int, 3> &a, const std::array<int, 3> &b,
                  std::array<int, 3> &pa, std::array<int, 3> &pb) {
  int k = 0;
  std::array<bool, 3> used_a{}, used_b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (a[i] == b[j]) {
        pa[k] = a[i];
        pb[k] = b[j];
        used_a[i] = used_b[j] = true;
        ++k;
      }
  int ka = k, kb = k;
  for (int i = 0; i < 3; ++i) {
    if (!used_a[i])
      pa[ka++] = a[i];
    if (!used_b[i])
      pb[kb++] = b[i];
  }
}

void validate_orders(const AssemblyOptions &opt) {
  if (opt.identical_order < 2 || opt.edge_order < 2 || opt.vertex_order < 2)
    throw InvalidInput("quadrature order below minimum (2) for touching element pairs");
  if (opt.near_order < 1)
    throw InvalidInput("near-field quadrature order must be positive");
  if (opt.boundary_order < 2 || opt.boundary_far_order < 1)
    throw InvalidInput("boundary quadrature order below minimum");
  if (!(opt.near_ratio > 0.0) || opt.far_ratio < opt.near_ratio)
    throw InvalidInput("pair distance thresholds must satisfy 0 < near_ratio <= far_ratio");
}

} // namespace

Matrix assemble_interior_raw(const Mesh &mesh, const SpatialKernel &g, double s,
                             const AssemblyOptions &opt) {
  validate_orders(opt);
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("interior assembly requires 0 < s < 1");
  const double sigma = 2.0 + 2.0 * s;
  const double half_sigma = 0.5 * sigma;
  const int nt = static_cast<int>(mesh.num_triangles());
  const int nv = static_cast<int>(mesh.num_vertices());
  const bool unit = !g;

  std::vector<Vec2> centroid(nt);
  std::vector<double> diam(nt);
  for (int i = 0; i < nt; ++i) {
    const auto p = mesh.corners(i);
    centroid[i] = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
    diam[i] = std::max({norm(p[1] - p[0]), norm(p[2] - p[1]), norm(p[0] - p[2])});
  }

  const std::array<quad::TriangleRule, 3> rules{quad::symmetric_triangle(2),
                                                quad::symmetric_triangle(5),
                                                quad::collapsed_triangle(opt.near_order)};
  struct Bary {
    std::vector<std::array<double, 3>> l;
  };
  std::array<Bary, 3> bary;
  for (int r = 0; r < 3; ++r)
    for (std::size_t q = 0; q < rules[r].size(); ++q)
      bary[r].l.push_back({1.0 - rules[r].xi1[q] - rules[r].xi2[q], rules[r].xi1[q], rules[r].xi2[q]});

  if (rules[2].size() > 64)
    throw InvalidInput("near-field order too large (at most 8)");
  const unsigned chunks = chunk_count(opt);
  std::vector<Matrix> buf(chunks);
  std::vector<std::vector<std::array<double, 9>>> self(chunks);

  parallel_chunks(chunks, chunks, [&](std::size_t cb, std::size_t ce, unsigned) {
    for (std::size_t c = cb; c < ce; ++c) {
      Matrix &M = buf[c];
      M.setZero(nv, nv);
      auto &S = self[c];
      S.assign(nt, std::array<double, 9>{});
      std::map<CacheKey, LocalMatrix> cache;
      std::vector<Vec2> xs, ys;

      auto touching = [&](int i, int j, int kind, double factor) {
        std::array<int, 3> g1, g2;
        if (kind == 3) {
          g1 = g2 = mesh.triangles[i];
        } else {
          order_shared(mesh.triangles[i], mesh.triangles[j], g1, g2);
        }
        const Vec2 base = mesh.vertices[g1[0]];
        pairq::Tri T1, T2;
        for (int k = 0; k < 3; ++k) {
          T1[k] = mesh.vertices[g1[k]] - base;
          T2[k] = mesh.vertices[g2[k]] - base;
        }
        std::array<int, 6> uni;
        int m = 3;
        for (int k = 0; k < 3; ++k)
          uni[k] = g1[k];
        std::array<int, 3> idx2;
        for (int k = 0; k < 3; ++k) {
          int pos = -1;
          for (int l = 0; l < m; ++l)
            if (uni[l] == g2[k])
              pos = l;
          if (pos < 0) {
            uni[m] = g2[k];
            pos = m++;
          }
          idx2[k] = pos;
        }

        LocalMatrix L;
        bool cached = false;
        CacheKey key{};
        if (unit) {
          const double scale = std::ldexp(1.0, 30) / diam[i];
          key[0] = kind;
          for (int k = 0; k < 3; ++k) {
            key[1 + 2 * k] = std::llround(T1[k].x * scale);
            key[2 + 2 * k] = std::llround(T1[k].y * scale);
            key[7 + 2 * k] = std::llround(T2[k].x * scale);
            key[8 + 2 * k] = std::llround(T2[k].y * scale);
          }
          auto it = cache.find(key);
          if (it != cache.end()) {
            L = it->second;
            cached = true;
          }
        }
        if (!cached) {
          std::vector<pairq::PairPoint> pts;
          if (kind == 3)
            pts = pairq::identical(T1, sigma, opt.identical_order);
          else if (kind == 2)
            pts = pairq::common_edge(T1, T2, sigma, opt.edge_order);
          else
            pts = pairq::common_vertex(T1, T2, sigma, opt.vertex_order);
          L.size = m;
          for (const auto &p : pts) {
            std::array<double, 6> psi{};
            for (int k = 0; k < 3; ++k) {
              psi[k] += p.bx[k];
              psi[idx2[k]] -= p.by[k];
            }
            double w = p.w;
            if (!unit) {
              const Vec2 x = base + p.bx[0] * T1[0] + p.bx[1] * T1[1] + p.bx[2] * T1[2];
              const Vec2 y = base + p.by[0] * T2[0] + p.by[1] * T2[1] + p.by[2] * T2[2];
              w *= g(x, y);
            }
            for (int a = 0; a < m; ++a)
              for (int b = 0; b < m; ++b)
                L.a[6 * a + b] += w * psi[a] * psi[b];
          }
          if (unit)
            cache.emplace(key, L);
        }
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            M(uni[a], uni[b]) += factor * L.a[6 * a + b];
      };

      auto disjoint = [&](int i, int j, int r) {
        const auto &rule = rules[r];
        const auto &lam = bary[r].l;
        const auto P = mesh.corners(i), Q = mesh.corners(j);
        const double a1 = 2.0 * mesh.areas[i], a2 = 2.0 * mesh.areas[j];
        const std::size_t nq = rule.size();
        xs.resize(nq);
        ys.resize(nq);
        for (std::size_t q = 0; q < nq; ++q) {
          xs[q] = lam[q][0] * P[0] + lam[q][1] * P[1] + lam[q][2] * P[2];
          ys[q] = lam[q][0] * Q[0] + lam[q][1] * Q[1] + lam[q][2] * Q[2];
        }
        std::array<double, 9> A11{}, A22{}, A12{};
        double s2[64] = {};
        for (std::size_t q1 = 0; q1 < nq; ++q1) {
          double s1 = 0.0;
          double v[3] = {0.0, 0.0, 0.0};
          for (std::size_t q2 = 0; q2 < nq; ++q2) {
            double w = rule.w[q1] * rule.w[q2] * std::pow(norm2(xs[q1] - ys[q2]), -half_sigma);
            if (!unit)
              w *= g(xs[q1], ys[q2]);
            s1 += w;
            s2[q2] += w;
            v[0] += w * lam[q2][0];
            v[1] += w * lam[q2][1];
            v[2] += w * lam[q2][2];
          }
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
              A11[3 * a + b] += s1 * lam[q1][a] * lam[q1][b];
              A12[3 * a + b] -= lam[q1][a] * v[b];
            }
          }
        }
        for (std::size_t q2 = 0; q2 < nq; ++q2)
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              A22[3 * a + b] += s2[q2] * lam[q2][a] * lam[q2][b];
        const double f = 2.0 * a1 * a2;
        for (int k = 0; k < 9; ++k) {
          S[i][k] += f * A11[k];
          S[j][k] += f * A22[k];
        }
        const auto &ti = mesh.triangles[i], &tj = mesh.triangles[j];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const double v = f * A12[3 * a + b];
            M(ti[a], tj[b]) += v;
            M(tj[b], ti[a]) += v;
          }
      };

      for (int i = static_cast<int>(c); i < nt; i += static_cast<int>(chunks)) {
        touching(i, i, 3, 1.0);
        for (int j = i + 1; j < nt; ++j) {
          const int sh = shared_count(mesh.triangles[i], mesh.triangles[j]);
          if (sh == 2) {
            touching(i, j, 2, 2.0);
          } else if (sh == 1) {
            touching(i, j, 1, 2.0);
          } else {
            const double ratio = norm(centroid[i] - centroid[j]) / std::max(diam[i], diam[j]);
            disjoint(i, j, ratio >= opt.far_ratio ? 0 : ratio >= opt.near_ratio ? 1 : 2);
          }
        }
      }
    }
  });

  tree_reduce(buf);
  for (std::size_t stride = 1; stride < self.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < self.size(); i += 2 * stride)
      for (int e = 0; e < nt; ++e)
        for (int k = 0; k < 9; ++k)
          self[i][e][k] += self[i + stride][e][k];
  Matrix &M = buf[0];
  for (int e = 0; e < nt; ++e) {
    const auto &t = mesh.triangles[e];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        M(t[a], t[b]) += self[0][e][3 * a + b];
  }
  Matrix out = 0.5 * (M + M.transpose());
  return out;
}

Matrix assemble_interior(const Mesh &mesh, const PairCoefficient &K, double t, double s,
                         const AssemblyOptions &opt) {
  const double c = 0.5 * compute_CNs(2, s);
  if (K.separable())
    return (c * K.factor(t)) * assemble_interior_raw(mesh, K.spatial, s, opt);
  SpatialKernel g = [&](const Vec2 &x, const Vec2 &y) { return K.full(t, x, y); };
  return c * assemble_interior_raw(mesh, g, s, opt);
}

Matrix assemble_theta_raw(const Mesh &mesh, const BoundaryMesh &boundary, const SpatialKernel &g,
                          double alpha, const AssemblyOptions &opt) {
  validate_orders(opt);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("boundary operator requires 0 < alpha < 1");
  const double sigma = boundary.d + 2.0 * alpha;
  const int nv = static_cast<int>(mesh.num_vertices());
  const auto &segs = boundary.segments;
  const int ns = static_cast<int>(segs.size());
  const auto far = quad::gauss_legendre01(opt.boundary_far_order);
  Matrix M = Matrix::Zero(nv, nv);
  const auto &V = mesh.vertices;

  for (int i = 0; i < ns; ++i) {
    for (int j = i; j < ns; ++j) {
      const auto &si = segs[i], &sj = segs[j];
      std::array<int, 4> dof;
      int m;
      std::vector<pairq::SegPoint> pts;
      Vec2 x0, x1, y0, y1; // x = x0 + a (x1 - x0), y = y0 + b (y1 - y0)
      int shared = -1, oi = -1, oj = -1;
      if (i != j) {
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            if (si[a] == sj[b]) {
              shared = si[a];
              oi = si[1 - a];
              oj = sj[1 - b];
            }
      }
      if (i == j) {
        m = 2;
        dof = {si[0], si[1], 0, 0};
        x0 = y0 = V[si[0]];
        x1 = y1 = V[si[1]];
        pts = pairq::segment_identical(x0, x1, sigma, opt.boundary_order);
      } else if (shared >= 0) {
        m = 3;
        dof = {shared, oi, oj, 0};
        x0 = y0 = V[shared];
        x1 = V[oi];
        y1 = V[oj];
        pts = pairq::segment_adjacent(x0, x1, y1, sigma, opt.boundary_order);
      } else {
        m = 4;
        dof = {si[0], si[1], sj[0], sj[1]};
        x0 = V[si[0]];
        x1 = V[si[1]];
        y0 = V[sj[0]];
        y1 = V[sj[1]];
        pts = pairq::segment_tensor(x0, x1, y0, y1, sigma, far);
      }
      std::array<double, 16> L{};
      for (const auto &p : pts) {
        std::array<double, 4> psi{};
        if (m == 2) {
          psi = {p.b - p.a, p.a - p.b, 0.0, 0.0};
        } else if (m == 3) {
          psi = {p.b - p.a, p.a, -p.b, 0.0};
        } else {
          psi = {1.0 - p.a, p.a, p.b - 1.0, -p.b};
        }
        double w = p.w;
        if (g)
          w *= g(x0 + p.a * (x1 - x0), y0 + p.b * (y1 - y0));
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            L[4 * a + b] += w * psi[a] * psi[b];
      }
      const double f = i == j ? 1.0 : 2.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          M(dof[a], dof[b]) += f * L[4 * a + b];
    }
  }
  return 0.5 * (M + M.transpose());
}

Matrix assemble_theta(const Mesh &mesh, const BoundaryMesh &boundary, const PairCoefficient &zeta,
                      double t, double alpha, const AssemblyOptions &opt) {
  if (zeta.separable())
    return zeta.factor(t) * assemble_theta_raw(mesh, boundary, zeta.spatial, alpha, opt);
  SpatialKernel g = [&](const Vec2 &x, const Vec2 &y) { return zeta.full(t, x, y); };
  return assemble_theta_raw(mesh, boundary, g, alpha, opt);
}

Vector assemble_boundary_mass(const Mesh &mesh, const BoundaryMesh &boundary,
                              const PointCoefficient &b, double t) {
  Vector d = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  std::vector<std::string> bad;
  for (int v : boundary.nodes) {
    const double val = b(t, mesh.vertices[v]);
    if (!(val > 0.0) && bad.size() < 5)
      bad.push_back("inf b > b_0 violated: b(" + std::to_string(t) + ", node " +
                    std::to_string(v) + ") = " + std::to_string(val));
    d[v] = val * boundary.mu[v];
  }
  if (!bad.empty())
    throw HypothesisViolation(bad);
  return d;
}

Vector assemble_mass_m(const Mesh &mesh, const BoundaryMesh &boundary) {
  return lumped_measure(mesh, boundary).combined();
}

Matrix FormSnapshot::E() const {
  Matrix e = S_int + S_bdy;
  e.diagonal() += M_b;
  return e;
}

FormAssembler::FormAssembler(Mesh mesh, CoefficientSet coeffs, AssemblyOptions opt)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)), opt_(opt) {
  validate_orders(opt_);
  boundary_ = extract_boundary(mesh_, coeffs_.pack.d);
  M_m_ = assemble_mass_m(mesh_, boundary_);
}

const Matrix &FormAssembler::interior_spatial() const {
  std::lock_guard lock(mutex_);
  if (!int_spatial_)
    int_spatial_ = std::make_unique<Matrix>(
        assemble_interior_raw(mesh_, coeffs_.K.spatial, coeffs_.pack.s, opt_));
  return *int_spatial_;
}

const Matrix &FormAssembler::theta_spatial() const {
  std::lock_guard lock(mutex_);
  if (!theta_spatial_)
    theta_spatial_ = std::make_unique<Matrix>(
        assemble_theta_raw(mesh_, boundary_, coeffs_.zeta.spatial, coeffs_.pack.alpha, opt_));
  return *theta_spatial_;
}

FormSnapshot FormAssembler::snapshot(double t) const {
  FormSnapshot f;
  f.t = t;
  const double c = 0.5 * coeffs_.pack.CNs;
  const auto &K = coeffs_.K;
  if (K.separable())
    f.S_int = (c * K.factor(t)) * interior_spatial();
  else
    f.S_int = assemble_interior(mesh_, K, t, coeffs_.pack.s, opt_);
  const auto &z = coeffs_.zeta;
  if (z.separable())
    f.S_bdy = z.factor(t) * theta_spatial();
  else
    f.S_bdy = assemble_theta(mesh_, boundary_, z, t, coeffs_.pack.alpha, opt_);
  f.M_b = assemble_boundary_mass(mesh_, boundary_, coeffs_.b, t);
  f.M_m = M_m_;
  return f;
}

Matrix FormAssembler::energy(double t) const { return snapshot(t).E(); }

const Matrix &FormAssembler::unit_seminorm() const {
  if (coeffs_.K.unit_spatial())
    return interior_spatial();
  std::lock_guard lock(mutex_);
  if (!unit_)
    unit_ = std::make_unique<Matrix>(assemble_interior_raw(mesh_, {}, coeffs_.pack.s, opt_));
  return *unit_;
}

const Matrix &FormAssembler::hs_gram() const {
  const Matrix &u = unit_seminorm();
  std::lock_guard lock(mutex_);
  if (!gram_) {
    gram_ = std::make_unique<Matrix>(u);
    gram_->diagonal() += M_m_;
  }
  return *gram_;
}

Matrix FormAssembler::boundary_gram() const {
  Matrix G;
  if (coeffs_.zeta.unit_spatial()) {
    G = theta_spatial();
  } else {
    std::lock_guard lock(mutex_);
    if (!theta_unit_)
      theta_unit_ = std::make_unique<Matrix>(
          assemble_theta_raw(mesh_, boundary_, {}, coeffs_.pack.alpha, opt_));
    G = *theta_unit_;
  }
  for (std::size_t v = 0; v < boundary_.mu.size(); ++v)
    G(v, v) += boundary_.mu[v];
  return G;
}

} // namespace wentzell
