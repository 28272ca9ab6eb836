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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles/oracles.hpp"
#include "wentzell/error.hpp"
#include "wentzell/green.hpp"

#include <cmath>

using namespace wentzell;

namespace {

Vector nodal(const Mesh &mesh, const std::function<double(const Vec2 &)> &f) {
  Vector u(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    u[static_cast<Eigen::Index>(i)] = f(mesh.vertices[i]);
  return u;
}

int vertex_at(const Mesh &mesh, double x, double y) {
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    if (std::abs(mesh.vertices[i].x - x) < 1e-12 && std::abs(mesh.vertices[i].y - y) < 1e-12)
      return static_cast<int>(i);
  return -1;
}

double bump(const Vec2 &p) { return std::exp(-10.0 * ((p.x - 0.4) * (p.x - 0.4) + (p.y - 0.55) * (p.y - 0.55))); }

} // namespace

TEST_CASE("locator") {
  const auto mesh = build_unit_square_mesh(0.25);
  MeshLocator loc(mesh);
  const Vector u = nodal(mesh, [](const Vec2 &p) { return 2.0 * p.x - p.y + 0.5; });
  for (const Vec2 p : {Vec2{0.1, 0.2}, Vec2{0.9, 0.05}, Vec2{0.5, 0.5}, Vec2{1.0, 1.0}})
    CHECK(loc.evaluate(u, p) == doctest::Approx(2.0 * p.x - p.y + 0.5));
  CHECK(loc.locate({1.5, 0.5}) == -1);
  CHECK_THROWS_AS(loc.evaluate(u, {-0.1, 0.5}), InvalidInput);
}

TEST_CASE("graded triangle rule") {
  const std::array<Vec2, 3> T{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  for (int n : {4, 10}) {
    double area = 0, mx = 0, sing = 0;
    for (const auto &q : graded_triangle_rule(T, n)) {
      area += q.w;
      mx += q.w * q.p.x * q.p.x * q.p.y;
      sing += q.w / std::sqrt(q.p.y);
    }
    const double tol = n == 4 ? 1e-3 : 1e-8;
    CHECK(area == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mx == doctest::Approx(1.0 / 60.0).epsilon(tol));
    CHECK(sing == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
  }
  CHECK(graded_triangle_rule(T, 3).size() == 54);
}

TEST_CASE("P.V. of constants and of linear fields at the centre") {
  const auto mesh = build_unit_square_mesh(0.25);
  RegionalOperator B(mesh, constant_pair(1.0), 0.75);
  const Vector one = Vector::Constant(static_cast<Eigen::Index>(mesh.num_vertices()), 3.0);
  CHECK(B.apply(one, 0.0, {0.37, 0.41}).value == 0.0);
  const Vector lin = nodal(mesh, [](const Vec2 &p) { return p.x + 2.0 * p.y; });
  const auto r = B.apply(lin, 0.0, {0.5, 0.5});
  CHECK(std::abs(r.value) < 1e-8);
}

TEST_CASE("P.V. matches the adaptive polar oracle") {
  const double s = 0.75;
  for (double h : {0.25, 0.125}) {
    const auto mesh = build_unit_square_mesh(h);
    const Vector u = nodal(mesh, bump);
    const int cells = static_cast<int>(std::lround(1.0 / h));
    const oracle::P1Field f{0.0, 1.0, cells, std::vector<double>(u.data(), u.data() + u.size())};
    RegionalOperator B(mesh, constant_pair(1.0), s);
    for (const Vec2 x : {Vec2{0.37, 0.41}, Vec2{0.61, 0.2}, Vec2{0.07, 0.52}}) {
      const int t = B.locator().locate(x);
      const auto c = mesh.corners(static_cast<std::size_t>(t));
      double r = 1e9;
      for (int e = 0; e < 3; ++e) {
        const Vec2 a = c[e], b = c[(e + 1) % 3];
        const Vec2 ab = b - a;
        const double l = std::clamp(dot(x - a, ab) / norm2(ab), 0.0, 1.0);
        r = std::min(r, norm(x - (a + l * ab)));
      }
      const double expect = compute_CNs(2, s) *
                            oracle::pv_point(0.0, 1.0, [&](double a, double b) { return f(a, b); },
                                             2.0 + 2.0 * s, x.x, x.y, r);
      const double got = B.apply(u, 0.0, x).value;
      CAPTURE(h);
      CAPTURE(x.x);
      CHECK(got == doctest::Approx(expect).epsilon(0.01));
    }
  }
}

TEST_CASE("P.V. failure at a vertex with unbalanced kinks") {
  const auto mesh = build_unit_square_mesh(0.25);
  RegionalOperator B(mesh, constant_pair(1.0), 0.75);
  Vector u = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  u[vertex_at(mesh, 0.75, 0.5)] = 1.0;
  try {
    B.apply(u, 0.0, {0.5, 0.5});
    FAIL("expected a P.V. failure");
  } catch (const NumericalFailure &e) {
    CHECK(e.kind() == "pv");
  }
  CHECK_THROWS_AS(B.apply(u, 0.0, {0.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(B.apply(u, 0.0, {1.2, 0.5}), InvalidInput);
}

TEST_CASE("interior Green identity: volume terms agree for zero-trace tests") {
  for (double h : {0.25, 0.125}) {
    FormAssembler fa(build_unit_square_mesh(h), default_coefficients());
    const auto &mesh = fa.mesh();
    const Vector u = nodal(mesh, [](const Vec2 &p) { return std::cos(M_PI * p.x) * std::cos(M_PI * p.y) + 0.3 * p.x * p.x; });
    RegionalOperator B(mesh, fa.coefficients().K, 0.75);
    const Matrix S = fa.snapshot(0.0).S_int;
    for (const Vec2 c : {Vec2{0.5, 0.5}, Vec2{h, 0.5}}) {
      Vector e = Vector::Zero(u.size());
      e[vertex_at(mesh, c.x, c.y)] = 1.0;
      const auto vt = green_volume_terms(B, S, u, e, 0.0);
      CAPTURE(h);
      CHECK(vt.pv_term == doctest::Approx(vt.form_term).epsilon(0.01));
    }
  }
}

TEST_CASE("conormal functional") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &mesh = fa.mesh();
  const Vector one = Vector::Constant(static_cast<Eigen::Index>(mesh.num_vertices()), 2.5);
  const auto c0 = conormal(fa, one, 0.0);
  CHECK(c0.g.size() == static_cast<Eigen::Index>(fa.boundary().nodes.size()));
  CHECK(c0.g.cwiseAbs().maxCoeff() == 0.0);

  const Vector u1 = nodal(mesh, [](const Vec2 &p) { return p.x * p.x + 0.5 * p.y; });
  const Vector u2 = nodal(mesh, bump);
  const auto a = conormal(fa, u1, 0.0), b = conormal(fa, u2, 0.0), ab = conormal(fa, u1 + u2, 0.0);
  CHECK((ab.g - a.g - b.g).norm() <= 1e-8 * std::max(1.0, ab.g.norm()));
  // Pairing with the constant test function: l(u, 1) = -int B u = 0 by antisymmetry,
  // up to the volume-term quadrature error on the scale of the form term.
  const Vector Su = fa.snapshot(0.0).S_int * u1;
  CHECK(std::abs(a.pairing(Vector::Ones(u1.size()))) < 0.01 * Su.cwiseAbs().sum());
}

TEST_CASE("prefractal approximation") {
  const auto full = build_unit_square_mesh(0.25);
  const auto fam = build_prefractal_sequence(3, 4);
  const Vector u = nodal(full, [](const Vec2 &p) { return p.x * p.x + 0.5 * p.y; });
  const Vector v1 = nodal(full, [](const Vec2 &p) { return 1.0 + p.x; });
  const Vector v2 = nodal(full, [](const Vec2 &p) { return p.y * p.y; });
  const auto K = constant_pair(1.0);
  const auto t1 = lipschitz_approx_convergence(full, u, v1, fam, K, 0.75, 0.0, {}, {}, 2);
  const auto t2 = lipschitz_approx_convergence(full, u, v2, fam, K, 0.75, 0.0, {}, {}, 2);
  const auto t12 = lipschitz_approx_convergence(full, u, 2.0 * v1 + v2, fam, K, 0.75, 0.0, {}, {}, 2);
  REQUIRE(t1.rows.size() == 3);
  CHECK(t1.rows.front().n == 1);
  CHECK(t1.monotone_area);
  CHECK(t1.cauchy_decrease);
  for (std::size_t n = 0; n < 3; ++n)
    CHECK(t12.rows[n].l_n == doctest::Approx(2.0 * t1.rows[n].l_n + t2.rows[n].l_n).epsilon(1e-9));

  const Vector c = Vector::Constant(u.size(), 1.0);
  const auto tc = lipschitz_approx_convergence(full, c, v1, fam, K, 0.75, 0.0, {}, {}, 2);
  CHECK(tc.l_full == 0.0);
  for (const auto &r : tc.rows)
    CHECK(r.l_n == 0.0);
}

TEST_CASE("strong residuals") {
  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  const auto n = static_cast<Eigen::Index>(fa.mesh().num_vertices());
  const auto J = power_nonlinearity(3.0);

  // Constant in space: the interior residual is du/dt - J(u).
  std::vector<double> ts{0.0, 0.1, 0.2, 0.3};
  std::vector<Vector> us;
  for (double t : ts)
    us.push_back(Vector::Constant(n, 1.0 + t * t));
  const auto it = make_iterate(ts, us, fa.mass(), pack.p, pack.b_w);
  const auto r = strong_residuals(fa, it, J, 0.2);
  const double c = 1.0 + 0.04;
  for (Eigen::Index j = 0; j < n; ++j)
    if (r.interior[j] != 0.0)
      CHECK(r.interior[j] == doctest::Approx(0.4 - c * c * c).epsilon(1e-9));
  CHECK(r.interior.cwiseAbs().maxCoeff() > 0.0);
  CHECK(std::isfinite(r.boundary_norm));
  CHECK_THROWS_AS(strong_residuals(fa, it, J, 0.25), InvalidInput);
  CHECK_THROWS_AS(strong_residuals(fa, make_iterate({0.0, 0.1}, {us[0], us[1]}, fa.mass(), pack.p, pack.b_w), J, 0.1),
                  InvalidInput);

  // Linear problem: both residuals shrink under simultaneous refinement.
  std::vector<double> interior, boundary;
  for (int k = 0; k < 2; ++k) {
    FormAssembler f(build_unit_square_mesh(0.125 / (1 << k)), default_coefficients());
    const Vector phi = nodal(f.mesh(), [](const Vec2 &p) { return 0.05 * (1.0 + std::cos(M_PI * p.x) * std::cos(M_PI * p.y)); });
    EvolutionFamily fam(f, TimeGrid::uniform(1.0, static_cast<std::size_t>(40 << k)));
    const auto sol = picard_solve(phi, fam, zero_nonlinearity(3.0), pack);
    const auto res = strong_residuals(f, sol.solution, zero_nonlinearity(3.0), 0.5, 0.25);
    interior.push_back(res.interior_norm);
    boundary.push_back(res.boundary_norm);
  }
  CHECK(interior[1] < interior[0]);
  CHECK(boundary[1] < boundary[0]);
}
