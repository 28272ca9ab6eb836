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

#include "wentzell/green.hpp"

#include "wentzell/error.hpp"
#include "wentzell/norms.hpp"
#include "wentzell/parallel.hpp"
#include "wentzell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wentzell {

namespace {

double mesh_size(const Mesh &mesh) {
  double h = 0.0;
  for (double a : mesh.areas)
    h = std::max(h, std::sqrt(2.0 * a));
  return h;
}

double segment_distance(const Vec2 &p, const Vec2 &a, const Vec2 &b) {
  const Vec2 ab = b - a;
  const double l2 = norm2(ab);
  const double s = l2 > 0.0 ? std::clamp(dot(p - a, ab) / l2, 0.0, 1.0) : 0.0;
  return norm(p - (a + s * ab));
}

} // namespace

MeshLocator::MeshLocator(const Mesh &mesh) : mesh_(mesh) {
  if (mesh.num_triangles() == 0)
    throw InvalidInput("locator needs a non-empty mesh");
  lo_ = hi_ = mesh.vertices[0];
  for (const auto &v : mesh.vertices) {
    lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y)};
    hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y)};
  }
  const double h = std::max(mesh.max_edge(), 1e-300);
  nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x - lo_.x) / h)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y - lo_.y) / h)));
  buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
  auto cell = [&](double v, double lo, double hi, int n) {
    const double f = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    return std::clamp(static_cast<int>(std::floor(f * n)), 0, n - 1);
  };
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const double x0 = std::min({c[0].x, c[1].x, c[2].x}), x1 = std::max({c[0].x, c[1].x, c[2].x});
    const double y0 = std::min({c[0].y, c[1].y, c[2].y}), y1 = std::max({c[0].y, c[1].y, c[2].y});
    for (int i = cell(x0, lo_.x, hi_.x, nx_); i <= cell(x1, lo_.x, hi_.x, nx_); ++i)
      for (int j = cell(y0, lo_.y, hi_.y, ny_); j <= cell(y1, lo_.y, hi_.y, ny_); ++j)
        buckets_[static_cast<std::size_t>(j * nx_ + i)].push_back(static_cast<int>(t));
  }
}

std::array<double, 3> MeshLocator::barycentric(int tri, const Vec2 &p) const {
  const auto c = mesh_.corners(static_cast<std::size_t>(tri));
  const double det = cross(c[1] - c[0], c[2] - c[0]);
  const double l1 = cross(p - c[0], c[2] - c[0]) / det;
  const double l2 = cross(c[1] - c[0], p - c[0]) / det;
  return {1.0 - l1 - l2, l1, l2};
}

int MeshLocator::locate(const Vec2 &p) const {
  const double slack = 1e-12;
  if (p.x < lo_.x - slack || p.x > hi_.x + slack || p.y < lo_.y - slack || p.y > hi_.y + slack)
    return -1;
  auto idx = [](double v, double lo, double hi, int n) {
    const double f = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    return std::clamp(static_cast<int>(std::floor(f * n)), 0, n - 1);
  };
  const int i = idx(p.x, lo_.x, hi_.x, nx_), j = idx(p.y, lo_.y, hi_.y, ny_);
  for (int t : buckets_[static_cast<std::size_t>(j * nx_ + i)]) {
    const auto b = barycentric(t, p);
    if (b[0] >= -slack && b[1] >= -slack && b[2] >= -slack)
      return t;
  }
  return -1;
}

double MeshLocator::evaluate(const Vector &u, const Vec2 &p) const {
  const int t = locate(p);
  if (t < 0)
    throw InvalidInput("point outside the mesh");
  const auto b = barycentric(t, p);
  const auto &tri = mesh_.triangles[static_cast<std::size_t>(t)];
  return b[0] * u[tri[0]] + b[1] * u[tri[1]] + b[2] * u[tri[2]];
}

RegionalOperator::RegionalOperator(const Mesh &mesh, PairCoefficient K, double s, PvOptions opt)
    : mesh_(mesh), loc_(mesh), K_(std::move(K)), s_(s), CNs_(compute_CNs(2, s)), opt_(opt) {
  if (opt_.levels < 2 || !(opt_.ratio > 0.0 && opt_.ratio < 1.0))
    throw InvalidInput("P.V. needs at least two eps levels and 0 < ratio < 1");
  if (opt_.theta_panels < 4 || opt_.theta_panels % 4 != 0)
    throw InvalidInput("theta_panels must be a positive multiple of 4");
  std::map<std::pair<int, int>, int> count;
  for (const auto &t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto &[edge, c] : count)
    if (c == 1)
      boundary_edges_.push_back({mesh.vertices[edge.first], mesh.vertices[edge.second]});
}

double RegionalOperator::distance_to_boundary(const Vec2 &x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto &e : boundary_edges_)
    d = std::min(d, segment_distance(x, e[0], e[1]));
  return d;
}

double RegionalOperator::truncated_integral(const Vector &u, double t, const Vec2 &x, int tri,
                                            const std::vector<double> &eps,
                                            std::vector<double> &out) const {
  const double sigma = 2.0 + 2.0 * s_;
  const auto th = quad::gauss_legendre01(opt_.theta_order);
  const auto gl = quad::gauss_legendre01(opt_.radial_order);
  const double kf = K_.factor(t);
  const bool unit = K_.unit_spatial();
  const double eps_max = eps.front();
  const double h = mesh_.max_edge();
  const std::size_t L = eps.size();
  std::fill(out.begin(), out.end(), 0.0);

  const auto &T0 = mesh_.triangles[static_cast<std::size_t>(tri)];
  const auto b0 = loc_.barycentric(tri, x);
  const double ux = b0[0] * u[T0[0]] + b0[1] * u[T0[1]] + b0[2] * u[T0[2]];

  // int_a^b rho^{1-sigma} (ux - c - g rho) K drho, split geometrically from a.
  auto piece = [&](double a, double b, double c, double g, const Vec2 &w) {
    double sum = 0.0;
    while (a < b) {
      const double e = std::min(b, 4.0 * a);
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double r = a + (e - a) * gl.x[q];
        double k = kf;
        if (!unit)
          k = K_(t, x, x + r * w);
        sum += (e - a) * gl.w[q] * std::pow(r, 1.0 - sigma) * (ux - c - g * r) * k;
      }
      a = e;
    }
    return sum;
  };

  std::vector<double> ray(L);
  const int P = opt_.theta_panels;
  const double dth = 2.0 * M_PI / P;
  double total_weight = 0.0;
  for (int p = 0; p < P; ++p) {
    for (std::size_t q = 0; q < th.size(); ++q) {
      const double ang = dth * (p + th.x[q]);
      const double wt = dth * th.w[q];
      total_weight += wt;
      const Vec2 w{std::cos(ang), std::sin(ang)};
      std::fill(ray.begin(), ray.end(), 0.0);
      double rho = 0.0;
      int cur = tri;
      for (int guard = 0; cur >= 0 && guard < 100000; ++guard) {
        const auto &T = mesh_.triangles[static_cast<std::size_t>(cur)];
        const auto c = mesh_.corners(static_cast<std::size_t>(cur));
        // exit parameter: first edge line crossed going outward
        double exit = std::numeric_limits<double>::infinity();
        const double orient = cross(c[1] - c[0], c[2] - c[0]) > 0.0 ? 1.0 : -1.0;
        for (int e = 0; e < 3; ++e) {
          const Vec2 P0 = c[e], P1 = c[(e + 1) % 3];
          const Vec2 n{-(P1.y - P0.y) * orient, (P1.x - P0.x) * orient}; // inward
          const double nw = dot(n, w);
          if (nw < 0.0)
            exit = std::min(exit, dot(n, x - P0) / -nw);
        }
        if (!std::isfinite(exit))
          break;
        exit = std::max(exit, rho);
        // u on this triangle: u(y) = c0 + grad . y
        const double det = cross(c[1] - c[0], c[2] - c[0]);
        const double u0 = u[T[0]], u1 = u[T[1]], u2 = u[T[2]];
        const Vec2 grad{((u1 - u0) * (c[2].y - c[0].y) - (u2 - u0) * (c[1].y - c[0].y)) / det,
                        ((u2 - u0) * (c[1].x - c[0].x) - (u1 - u0) * (c[2].x - c[0].x)) / det};
        const double cc = u0 + dot(grad, x - c[0]); // value of the extension at x
        const double g = dot(grad, w);
        if (exit > rho) {
          if (rho >= eps_max) {
            const double v = piece(rho, exit, cc, g, w);
            for (auto &r : ray)
              r += v;
          } else {
            for (std::size_t k = 0; k < L; ++k)
              if (exit > eps[k])
                ray[k] += piece(std::max(rho, eps[k]), exit, cc, g, w);
          }
        }
        rho = exit;
        int next = -1;
        for (double eta = 1e-10 * h; eta < 1e-3 * h; eta *= 10.0) {
          next = loc_.locate(x + (rho + eta) * w);
          if (next != cur)
            break;
        }
        if (next == cur)
          next = -1;
        cur = next;
      }
      for (std::size_t k = 0; k < L; ++k)
        out[k] += wt * ray[k];
    }
  }
  for (auto &v : out)
    v *= CNs_;
  return total_weight;
}

PvResult RegionalOperator::apply(const Vector &u, double t, const Vec2 &x) const {
  if (u.size() != static_cast<Eigen::Index>(mesh_.num_vertices()))
    throw InvalidInput("field has the wrong size");
  const int tri = loc_.locate(x);
  if (tri < 0)
    throw InvalidInput("P.V. point outside the domain");
  const double db = distance_to_boundary(x);
  if (!(db > 0.0))
    throw InvalidInput("P.V. point on the boundary");
  const auto c = mesh_.corners(static_cast<std::size_t>(tri));
  double kink = std::min({segment_distance(x, c[0], c[1]), segment_distance(x, c[1], c[2]),
                          segment_distance(x, c[2], c[0])});
  const double h = mesh_.max_edge();
  if (kink < 1e-10 * h)
    kink = h;
  double e0 = opt_.eps0 > 0.0 ? opt_.eps0 : 0.5 * std::min(db, kink);
  if (e0 >= db)
    throw InvalidInput("eps0 must be smaller than the distance to the boundary");

  PvResult r;
  for (int k = 0; k < opt_.levels; ++k)
    r.eps.push_back(e0 * std::pow(opt_.ratio, k));
  r.truncated.assign(r.eps.size(), 0.0);
  truncated_integral(u, t, x, tri, r.eps, r.truncated);

  // Remainder of the truncated integral behaves like eps^{2 - 2s}.
  const double q = std::pow(opt_.ratio, 2.0 - 2.0 * s_);
  std::vector<double> R;
  for (std::size_t k = 0; k + 1 < r.truncated.size(); ++k)
    R.push_back((r.truncated[k + 1] - q * r.truncated[k]) / (1.0 - q));
  r.value = R.back();
  if (R.size() >= 2) {
    double spread = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      spread = std::max(spread, std::abs(u[i] - u[0]));
    const double scale = std::max(std::abs(R.back()), CNs_ * spread);
    const double change = std::abs(R.back() - R[R.size() - 2]);
    if (!std::isfinite(r.value) || change > opt_.tol * scale)
      throw NumericalFailure("pv", "eps-sequence did not converge at (" + std::to_string(x.x) +
                                       ", " + std::to_string(x.y) + "): change " +
                                       std::to_string(change));
  }
  return r;
}

std::vector<double> RegionalOperator::apply_many(const Vector &u, double t,
                                                 const std::vector<Vec2> &xs) const {
  std::vector<double> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i)
      out[i] = apply(u, t, xs[i]).value;
  });
  return out;
}

PvResult regional_laplacian_apply(const Mesh &mesh, const PairCoefficient &K, double s,
                                  const Vector &u, double t, const Vec2 &x, const PvOptions &opt) {
  return RegionalOperator(mesh, K, s, opt).apply(u, t, x);
}

std::vector<WeightedPoint> graded_triangle_rule(const std::array<Vec2, 3> &T, int n) {
  if (n < 1)
    throw InvalidInput("graded rule needs n >= 1");
  const auto gl = quad::gauss_legendre01(n);
  const Vec2 c = (1.0 / 3.0) * (T[0] + T[1] + T[2]);
  std::vector<WeightedPoint> out;
  out.reserve(static_cast<std::size_t>(6 * n * n));
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = T[e], b = T[(e + 1) % 3];
    const double area2 = std::abs(cross(b - a, c - a));
    for (int half = 0; half < 2; ++half)
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double v = gl.x[i];
        const double xi = half == 0 ? 0.5 * v * v : 1.0 - 0.5 * v * v;
        const double dxi = gl.w[i] * v;
        for (std::size_t j = 0; j < gl.size(); ++j) {
          const double w = gl.x[j] * gl.x[j];
          const double dw = gl.w[j] * 2.0 * gl.x[j];
          const Vec2 p = (1.0 - w) * (a + xi * (b - a)) + w * c;
          out.push_back({p, (1.0 - w) * area2 * dxi * dw});
        }
      }
  }
  return out;
}

namespace {

// Points of the graded rule on the selected triangles, with the hat values there.
struct TriPoints {
  std::vector<Vec2> p;
  std::vector<double> w;
  std::vector<int> tri;
  std::vector<std::array<double, 3>> bary;
};

TriPoints collect(const MeshLocator &loc, const std::vector<int> &tris, int order) {
  TriPoints out;
  for (int t : tris) {
    for (const auto &q : graded_triangle_rule(loc.mesh().corners(static_cast<std::size_t>(t)), order)) {
      out.p.push_back(q.p);
      out.w.push_back(q.w);
      out.tri.push_back(t);
      out.bary.push_back(loc.barycentric(t, q.p));
    }
  }
  return out;
}

Vector shifted(const Vector &u) { return (u.array() - u[0]).matrix(); }

} // namespace

VolumeTerms green_volume_terms(const RegionalOperator &B, const Matrix &S_int, const Vector &u,
                               const Vector &v, double t, int order) {
  const Mesh &mesh = B.locator().mesh();
  // S_int and B both annihilate constants, so shifting u makes constants give exact zeros.
  const Vector us = shifted(u);
  VolumeTerms r;
  r.form_term = v.dot(S_int * us);
  std::vector<int> tris;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto &T = mesh.triangles[t];
    if (v[T[0]] != 0.0 || v[T[1]] != 0.0 || v[T[2]] != 0.0)
      tris.push_back(static_cast<int>(t));
  }
  const auto pts = collect(B.locator(), tris, order);
  if (us.cwiseAbs().maxCoeff() == 0.0)
    return r;
  const auto Bu = B.apply_many(us, t, pts.p);
  for (std::size_t i = 0; i < pts.p.size(); ++i) {
    const auto &T = mesh.triangles[static_cast<std::size_t>(pts.tri[i])];
    const auto &b = pts.bary[i];
    r.pv_term += pts.w[i] * Bu[i] * (b[0] * v[T[0]] + b[1] * v[T[1]] + b[2] * v[T[2]]);
  }
  return r;
}

double ConormalFunctional::pairing(const Vector &v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s += g[static_cast<Eigen::Index>(i)] * v[nodes[i]];
  return s;
}

ConormalFunctional conormal(const FormAssembler &fa, const Vector &u, double t,
                            const PvOptions &opt, int order) {
  const Mesh &mesh = fa.mesh();
  const BoundaryMesh &bd = fa.boundary();
  if (u.size() != static_cast<Eigen::Index>(mesh.num_vertices()))
    throw InvalidInput("field has the wrong size");
  ConormalFunctional c;
  c.t = t;
  c.nodes = bd.nodes;
  const Vector us = shifted(u);
  const Vector Su = fa.snapshot(t).S_int * us;
  c.g.resize(static_cast<Eigen::Index>(bd.nodes.size()));
  for (std::size_t i = 0; i < bd.nodes.size(); ++i)
    c.g[static_cast<Eigen::Index>(i)] = Su[bd.nodes[i]];
  if (us.cwiseAbs().maxCoeff() == 0.0) {
    c.g.setZero();
    return c;
  }
  std::vector<int> tris;
  for (std::size_t t2 = 0; t2 < mesh.num_triangles(); ++t2) {
    const auto &T = mesh.triangles[t2];
    if (bd.on_boundary(T[0]) || bd.on_boundary(T[1]) || bd.on_boundary(T[2]))
      tris.push_back(static_cast<int>(t2));
  }
  RegionalOperator B(mesh, fa.coefficients().K, fa.coefficients().pack.s, opt);
  const auto pts = collect(B.locator(), tris, order);
  const auto Bu = B.apply_many(us, t, pts.p);
  for (std::size_t i = 0; i < pts.p.size(); ++i) {
    const auto &T = mesh.triangles[static_cast<std::size_t>(pts.tri[i])];
    for (int k = 0; k < 3; ++k) {
      const int li = bd.local_index[T[k]];
      if (li >= 0)
        c.g[li] -= pts.w[i] * Bu[i] * pts.bary[i][k];
    }
  }
  return c;
}

ApproxTable lipschitz_approx_convergence(const Mesh &full, const Vector &u, const Vector &v,
                                         const PrefractalFamily &family, const PairCoefficient &K,
                                         double s, double t, const AssemblyOptions &aopt,
                                         const PvOptions &popt, int order) {
  if (family.meshes.empty())
    throw InvalidInput("empty prefractal family");
  auto functional = [&](const Mesh &mesh, const Vector &uu, const Vector &vv) {
    const Matrix S = assemble_interior(mesh, K, t, s, aopt);
    RegionalOperator B(mesh, K, s, popt);
    return green_volume_terms(B, S, uu, vv, t, order).l();
  };
  ApproxTable table;
  table.l_full = functional(full, u, v);
  const MeshLocator loc(full);
  const double full_area = full.total_area();
  table.monotone_area = true;
  table.cauchy_decrease = true;
  for (std::size_t n = 0; n < family.meshes.size(); ++n) {
    const Mesh &mn = family.meshes[n];
    Vector un(static_cast<Eigen::Index>(mn.num_vertices())), vn(un.size());
    for (std::size_t i = 0; i < mn.num_vertices(); ++i) {
      un[static_cast<Eigen::Index>(i)] = loc.evaluate(u, mn.vertices[i]);
      vn[static_cast<Eigen::Index>(i)] = loc.evaluate(v, mn.vertices[i]);
    }
    ApproxRow row;
    row.n = static_cast<int>(n) + 1;
    row.delta = n < family.deltas.size() ? family.deltas[n] : 0.0;
    row.area = mn.total_area();
    row.l_n = functional(mn, un, vn);
    row.error = std::abs(row.l_n - table.l_full);
    if (!table.rows.empty()) {
      if (!(row.area > table.rows.back().area))
        table.monotone_area = false;
      if (row.error > table.rows.back().error)
        table.cauchy_decrease = false;
    }
    if (row.area > full_area * (1.0 + 1e-12))
      table.monotone_area = false;
    table.rows.push_back(row);
  }
  if (!table.monotone_area)
    throw StructuralError("prefractal areas do not increase monotonically inside the domain");
  return table;
}

StrongResiduals strong_residuals(const FormAssembler &fa, const MildIterate &solution,
                                 const Nonlinearity &J, double t, double margin) {
  const auto &ts = solution.t;
  if (ts.size() < 3)
    throw InvalidInput("strong residuals need at least three time nodes");
  std::size_t n = ts.size();
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (std::abs(ts[k] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
      n = k;
  if (n == ts.size())
    throw InvalidInput("strong residuals need a grid time");
  Vector ut;
  if (n == 0)
    ut = (solution.u[1] - solution.u[0]) / (ts[1] - ts[0]);
  else if (n + 1 == ts.size())
    ut = (solution.u[n] - solution.u[n - 1]) / (ts[n] - ts[n - 1]);
  else
    ut = (solution.u[n + 1] - solution.u[n - 1]) / (ts[n + 1] - ts[n - 1]);
  const Vector &u = solution.u[n];
  const Vector &M = fa.mass();
  const Vector R = M.cwiseProduct(ut) + fa.energy(ts[n]) * u - M.cwiseProduct(J(u));

  StrongResiduals r;
  r.t = ts[n];
  const Mesh &mesh = fa.mesh();
  const BoundaryMesh &bd = fa.boundary();
  const double cut = std::max(2.0 * mesh_size(mesh), margin);
  RegionalOperator probe(mesh, fa.coefficients().K, fa.coefficients().pack.s);
  r.interior = Vector::Zero(u.size());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    if (bd.on_boundary(static_cast<int>(j)))
      continue;
    if (probe.distance_to_boundary(mesh.vertices[static_cast<std::size_t>(j)]) < cut * (1 - 1e-12))
      continue;
    r.interior[j] = R[j] / M[j];
    sum += M[j] * r.interior[j] * r.interior[j];
  }
  r.interior_norm = std::sqrt(sum);

  const auto nb = static_cast<Eigen::Index>(bd.nodes.size());
  const Matrix Gfull = fa.boundary_gram();
  Matrix G(nb, nb);
  r.boundary.resize(nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    r.boundary[i] = R[bd.nodes[static_cast<std::size_t>(i)]];
    for (Eigen::Index k = 0; k < nb; ++k)
      G(i, k) = Gfull(bd.nodes[static_cast<std::size_t>(i)], bd.nodes[static_cast<std::size_t>(k)]);
  }
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("coercivity", "boundary Gram matrix is not positive definite");
  r.boundary_norm = std::sqrt(std::max(0.0, r.boundary.dot(llt.solve(r.boundary))));
  return r;
}

} // namespace wentzell
