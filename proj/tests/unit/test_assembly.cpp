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
#include "wentzell/assembly.hpp"
#include "wentzell/error.hpp"
#include "wentzell/parallel.hpp"

#include <random>

using namespace wentzell;

namespace {

const double kS = 0.75;
const double kSigma = 2.0 + 2.0 * kS;

oracle::P1Field field(int cells, const Vector &u) {
  return {0.0, 1.0, cells, std::vector<double>(u.data(), u.data() + u.size())};
}

double interior_oracle(int cells, const Vector &u) {
  const auto f = field(cells, u);
  auto F = [&](double x, double y) { return f(x, y); };
  return 0.5 * compute_CNs(2, kS) * oracle::gagliardo(0.0, 1.0, cells, kSigma, F, F, {}, 32, 8);
}

oracle::Chain square_chain(const Mesh &m, const BoundaryMesh &b) {
  oracle::Chain ch;
  for (int v : b.nodes)
    ch.pts.push_back({m.vertices[v].x, m.vertices[v].y});
  return ch;
}

std::vector<double> trace(const BoundaryMesh &b, const Vector &u) {
  std::vector<double> t;
  for (int v : b.nodes)
    t.push_back(u[v]);
  return t;
}

} // namespace

TEST_CASE("interior form matches the polar brute-force oracle") {
  AssemblyOptions opt;
  for (int cells : {2, 4}) {
    const auto mesh = build_unit_square_mesh(1.0 / cells);
    const auto S = assemble_interior(mesh, constant_pair(1.0), 0.0, kS, opt);
    const auto n = S.rows();
    std::vector<Vector> tests;
    for (int v : {0, cells / 2, (cells + 1) * (cells / 2) + cells / 2}) {
      Vector e = Vector::Zero(n);
      e[v] = 1.0;
      tests.push_back(e);
    }
    std::mt19937_64 rng(cells);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector r(n);
    for (Eigen::Index i = 0; i < n; ++i)
      r[i] = U(rng);
    tests.push_back(r);
    for (const auto &u : tests) {
      const double a = u.dot(S * u), o = interior_oracle(cells, u);
      CAPTURE(cells);
      CHECK(a == doctest::Approx(o).epsilon(0.01));
    }
  }
}

TEST_CASE("interior form with a variable kernel matches the oracle") {
  const auto mesh = build_unit_square_mesh(0.25);
  const auto K = expression_pair("1 + 0.5*(x1 + y1) + 0.25*x2*y2", 0.5, 3.0, 0.0);
  const auto S = assemble_interior(mesh, K, 0.0, kS, {});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Vector u(S.rows());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    u[i] = U(rng);
  const auto f = field(4, u);
  auto F = [&](double x, double y) { return f(x, y); };
  auto k = [](double x1, double x2, double y1, double y2) {
    return 1 + 0.5 * (x1 + y1) + 0.25 * x2 * y2;
  };
  const double o = 0.5 * compute_CNs(2, kS) * oracle::gagliardo(0.0, 1.0, 4, kSigma, F, F, k, 32, 8);
  CHECK(u.dot(S * u) == doctest::Approx(o).epsilon(0.01));
}

TEST_CASE("interior form structure") {
  const auto mesh = build_unit_square_mesh(0.125);
  const auto S = assemble_interior(mesh, constant_pair(1.0), 0.0, kS, {});
  const double mx = S.cwiseAbs().maxCoeff();
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * mx);
  CHECK((S * Vector::Ones(S.rows())).cwiseAbs().maxCoeff() <= 1e-12 * mx);
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12 * mx);
  const auto S2 = assemble_interior(mesh, constant_pair(2.0), 0.0, kS, {});
  CHECK((S2 - 2.0 * S).cwiseAbs().maxCoeff() <= 1e-13 * mx);
  const auto Kx = expression_pair("2", 1.0, 3.0, 0.0); // spatial path, no cache
  const auto Sx = assemble_interior(mesh, Kx, 0.0, kS, {});
  CHECK((Sx - 2.0 * S).cwiseAbs().maxCoeff() <= 1e-12 * mx);
}

TEST_CASE("deterministic assembly is bit-identical across thread budgets") {
  const auto mesh = build_unit_square_mesh(0.125);
  AssemblyOptions opt;
  set_thread_budget(1);
  const auto A = assemble_interior(mesh, constant_pair(1.0), 0.0, kS, opt);
  set_thread_budget(3);
  const auto B = assemble_interior(mesh, constant_pair(1.0), 0.0, kS, opt);
  set_thread_budget(0);
  CHECK(A.cwiseNotEqual(B).count() == 0);
}

TEST_CASE("touching-pair order below minimum is rejected") {
  AssemblyOptions opt;
  opt.edge_order = 1;
  CHECK_THROWS_AS(assemble_interior(build_unit_square_mesh(0.5), constant_pair(1.0), 0.0, kS, opt),
                  InvalidInput);
}

TEST_CASE("boundary form matches the arc-length oracle") {
  const double alpha = 0.25, sig = 1.0 + 2.0 * alpha;
  for (double h : {0.5, 0.25}) {
    const auto mesh = build_unit_square_mesh(h);
    const auto b = extract_boundary(mesh);
    const auto T = assemble_theta(mesh, b, constant_pair(1.0), 0.0, alpha, {});
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector u = Vector::Zero(T.rows());
    for (int v : b.nodes)
      u[v] = U(rng);
    Vector e = Vector::Zero(T.rows());
    e[b.nodes[1]] = 1.0;
    for (const auto &w : {u, e}) {
      const auto tr = trace(b, w);
      const double o = oracle::chain_gagliardo(square_chain(mesh, b), tr, tr, sig);
      CHECK(w.dot(T * w) == doctest::Approx(o).epsilon(0.01));
    }
    CHECK((T * Vector::Ones(T.rows())).cwiseAbs().maxCoeff() <= 1e-12 * T.cwiseAbs().maxCoeff());
    const auto T3 = assemble_theta(mesh, b, constant_pair(3.0), 0.0, alpha, {});
    CHECK((T3 - 3.0 * T).cwiseAbs().maxCoeff() <= 1e-13 * T.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("boundary form on a two-segment chain") {
  Mesh m;
  m.vertices = {{0.0, 0.0}, {0.5, 0.0}, {0.8, 0.4}};
  BoundaryMesh b;
  b.segments = {{0, 1}, {1, 2}};
  b.nodes = {0, 1, 2};
  b.mu = {0.25, 0.5, 0.25};
  b.local_index = {0, 1, 2};
  const auto T = assemble_theta_raw(m, b, {}, 0.25, {});
  oracle::Chain ch;
  ch.closed = false;
  for (auto p : m.vertices)
    ch.pts.push_back({p.x, p.y});
  const std::vector<double> hat{0.0, 1.0, 0.0};
  const double o = oracle::chain_gagliardo(ch, hat, hat, 1.5);
  CHECK(T(1, 1) == doctest::Approx(o).epsilon(0.01));
  CHECK_THROWS_AS(assemble_theta_raw(m, b, {}, 1.0, {}), InvalidInput);
}

TEST_CASE("boundary potential and mass") {
  const auto mesh = build_unit_square_mesh(0.125);
  const auto b = extract_boundary(mesh);
  const auto Mb = assemble_boundary_mass(mesh, b, constant_point(1.0), 0.0);
  CHECK(Mb.sum() == doctest::Approx(4.0).epsilon(1e-12));
  const auto M3 = assemble_boundary_mass(mesh, b, constant_point(3.0), 0.0);
  for (int v : b.nodes)
    CHECK(M3[v] == doctest::Approx(3.0 * b.mu[v]));
  // linear b is integrated exactly by the lumped rule: 1-D oracle by edges
  const auto lin = expression_point("2 + x1 + 0.5*x2", 1.0, 4.0, 0.0);
  const auto Ml = assemble_boundary_mass(mesh, b, lin, 0.0);
  const double exact = (2 + 0.5) + (3 + 0.25) + (2 + 0.5 + 0.5) + (2 + 0.25); // bottom, right, top, left
  CHECK(Ml.sum() == doctest::Approx(exact).epsilon(1e-10));
  CHECK_THROWS_AS(assemble_boundary_mass(mesh, b, expression_point("x1 - 0.5", 0.1, 1, 0), 0.0),
                  HypothesisViolation);
  const auto Mm = assemble_mass_m(mesh, b);
  CHECK(Mm.sum() == doctest::Approx(5.0).epsilon(1e-12));
  // interior nodes carry a third of their 8 (i+j even) or 4 (i+j odd) triangle areas
  CHECK(Mm[9 * 4 + 4] == doctest::Approx(8.0 * (0.125 * 0.125 / 2) / 3.0));
  CHECK(Mm[9 * 4 + 3] == doctest::Approx(4.0 * (0.125 * 0.125 / 2) / 3.0));
}

TEST_CASE("coercivity of the default form") {
  std::vector<double> betas;
  for (double h : {0.25, 0.125, 0.0625}) {
    FormAssembler fa(build_unit_square_mesh(h), default_coefficients());
    const auto snap = fa.snapshot(0.0);
    const double beta = coercivity_estimate(snap.E(), fa.hs_gram());
    CHECK(beta > 0.0);
    CHECK(coercivity_estimate(2.0 * snap.E(), fa.hs_gram()) == doctest::Approx(2.0 * beta));
    const Matrix E = snap.E();
    CHECK((E - E.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * E.cwiseAbs().maxCoeff());
    betas.push_back(beta);
  }
  for (double b : betas)
    CHECK(std::abs(b / betas.back() - 1.0) <= 0.2);
}

TEST_CASE("Nash ratio") {
  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  const auto &H = fa.hs_gram();
  const Vector one = Vector::Ones(H.rows());
  CHECK(nash_ratio(one, H, fa.mass(), 4.0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  const auto rep = nash_check(fa.mesh(), fa.boundary(), H, fa.mass(), 4.0, 1000, 42);
  CHECK(rep.samples == 1000);
  CHECK(std::isfinite(rep.C_emp));
  CHECK(rep.C_emp > 0.0);
  CHECK(nash_ratio(3.7 * rep.worst, H, fa.mass(), 4.0) ==
        doctest::Approx(rep.C_emp).epsilon(1e-12));
}

TEST_CASE("Hoelder-in-t constant") {
  auto c = default_coefficients();
  FormAssembler fa0(build_unit_square_mesh(0.25), c);
  const std::vector<double> times{0.0, 0.1, 0.35, 0.6, 1.0};
  const auto r0 = hoelder_in_t_check(fa0, times, c.pack.eta);
  CHECK(r0.constant == 0.0);
  c.K = sinusoidal_pair(0.25, c.pack.T, c.pack.eta);
  FormAssembler fa1(build_unit_square_mesh(0.25), c);
  const auto r1 = hoelder_in_t_check(fa1, times, c.pack.eta);
  CHECK(r1.constant > 0.0);
  CHECK(r1.constant <= 0.25 * std::pow(c.pack.T, 1.0 - c.pack.eta) * r1.norm_equivalence);
}
