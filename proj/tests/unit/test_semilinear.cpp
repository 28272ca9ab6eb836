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

#include "wentzell/error.hpp"
#include "wentzell/norms.hpp"
#include "wentzell/semilinear.hpp"

#include <cmath>

using namespace wentzell;

namespace {

Vector smooth_datum(const Mesh &mesh, double amp) {
  Vector phi(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const auto v = mesh.vertices[i];
    phi[static_cast<Eigen::Index>(i)] = amp * (1.0 + std::cos(M_PI * v.x) * std::cos(M_PI * v.y));
  }
  return phi;
}

// F(w) through explicit propagator matrices and the literal Duhamel sum.
std::vector<Vector> duhamel_oracle(const EvolutionFamily &fam, const Vector &phi,
                                   const Nonlinearity &J, const std::vector<Vector> &w) {
  const auto &g = fam.grid();
  std::vector<Vector> out;
  for (std::size_t n = 0; n <= g.steps(); ++n) {
    Vector v = fam.propagator(0, n) * phi;
    for (std::size_t k = 0; k < n; ++k)
      v += g.dt(k) * (fam.propagator(k + 1, n) * J(w[k + 1]));
    out.push_back(v);
  }
  return out;
}

} // namespace

TEST_CASE("power nonlinearity") {
  const auto J = power_nonlinearity(3.0);
  const Vector u = (Vector(2) << 1.0, -2.0).finished();
  const Vector Ju = J(u);
  CHECK(Ju[0] == 1.0);
  CHECK(Ju[1] == -8.0);
  CHECK(J(Vector::Zero(3)).norm() == 0.0);
  CHECK(J.lipschitz(2.0) == doctest::Approx(12.0));
  CHECK_THROWS_AS(power_nonlinearity(1.0), InvalidInput);

  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  for (double r : {0.1, 1.0, 5.0})
    CHECK(lipschitz_sample_ratio(J, fa.mass(), r, 1000, 9) <= 1.0);
}

TEST_CASE("growth condition for the power nonlinearity") {
  const auto pack = default_coefficients().pack;
  CHECK((1.0 - pack.a) / pack.b_w == doctest::Approx(2.0));
  const auto g = growth_condition_check(power_nonlinearity(3.0), pack);
  CHECK(g.bounded);
  for (double v : g.ratio)
    CHECK(v == doctest::Approx(3.0));
  auto stricter = pack;
  stricter.b_w = 0.1;
  CHECK(growth_condition_check(power_nonlinearity(3.0), stricter).bounded);
}

TEST_CASE("initial window") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 40));
  const auto zero = initial_window_check(Vector::Zero(fa.mass().size()), fam, pack, 1e-9);
  CHECK(zero.measured == 0.0);
  CHECK(zero.pass);
  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  const auto w1 = initial_window_check(phi, fam, pack, 0.1);
  const auto w3 = initial_window_check(3.0 * phi, fam, pack, 0.1);
  CHECK(w3.measured == doctest::Approx(3.0 * w1.measured));
  CHECK(w1.pass);
  CHECK(w1.phi_q_norm == doctest::Approx(lp_norm(phi, fa.mass(), 4.0)));
  CHECK(w1.T_bar == 1.0);
  CHECK_THROWS_AS(initial_window_check(phi, fam, pack, 0.0), InvalidInput);
}

TEST_CASE("picard map equals the literal Duhamel sum") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(0.5, 6));
  const auto J = power_nonlinearity(3.0);
  const Vector phi = smooth_datum(fa.mesh(), 0.3);
  std::vector<Vector> w;
  for (std::size_t k = 0; k <= 6; ++k)
    w.push_back(phi * (1.0 - 0.1 * static_cast<double>(k)));
  const auto it = make_iterate(fam.grid().t, w, fa.mass(), pack.p, pack.b_w);
  const auto F = picard_map(phi, fam, J, it, 0, pack);
  const auto O = duhamel_oracle(fam, phi, J, w);
  for (std::size_t n = 0; n <= 6; ++n)
    CHECK((F.u[n] - O[n]).norm() < 1e-12 * std::max(1.0, O[n].norm()));
}

TEST_CASE("picard with zero nonlinearity is the linear evolution") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  const auto r = picard_solve(phi, fam, zero_nonlinearity(3.0), pack);
  CHECK(r.status == PicardStatus::converged);
  CHECK(r.iterations == 1);
  for (std::size_t n = 0; n <= 20; ++n)
    CHECK((r.solution.u[n] - fam.propagate(phi, 0, n)).norm() < 1e-13);

  const auto im = imex_reference(phi, fam, zero_nonlinearity(3.0), pack);
  CHECK(!im.blew_up);
  CHECK((im.solution.u.back() - r.solution.u.back()).norm() < 1e-13);
}

TEST_CASE("picard contraction, residual and uniqueness") {
  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const auto J = power_nonlinearity(3.0);
  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  PicardOptions opt;
  opt.tol = 1e-12;
  const auto a = picard_solve(phi, fam, J, pack, opt);
  REQUIRE(a.status == PicardStatus::converged);
  CHECK(a.window.pass);
  CHECK(a.contraction_ratio < 1.0);
  CHECK(a.residual < 1e-8);
  CHECK(a.solution.weighted_norm < 2.0 * opt.kappa);
  for (std::size_t k = 1; k < a.distances.size(); ++k)
    CHECK(a.distances[k] < a.distances[k - 1]);

  opt.linear_seed = false;
  const auto b = picard_solve(phi, fam, J, pack, opt);
  REQUIRE(b.status == PicardStatus::converged);
  CHECK(y_distance(a.solution, b.solution, fa.mass(), pack.p, pack.b_w) < 2.0 * opt.tol);

  const auto again = picard_map(phi, fam, J, a.solution, 0, pack);
  CHECK(y_distance(again, a.solution, fa.mass(), pack.p, pack.b_w) < opt.tol);

  const auto gamma = hoelder_regularity_fit(a.solution, fa.mass(), pack.p, 0.1);
  CHECK(gamma.exponent > 0.0);
}

TEST_CASE("picard refuses data outside the window unless overridden") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const Vector phi = smooth_datum(fa.mesh(), 1.0);
  const auto r = picard_solve(phi, fam, power_nonlinearity(3.0), pack);
  CHECK(r.status == PicardStatus::window_failed);
  CHECK(!r.window.pass);
  PicardOptions opt;
  opt.allow_window_failure = true;
  opt.max_iter = 3;
  const auto forced = picard_solve(phi, fam, power_nonlinearity(3.0), pack, opt);
  CHECK(forced.status != PicardStatus::window_failed);
  CHECK(forced.iterations >= 1);
}

TEST_CASE("picard and IMEX agree to first order") {
  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  const auto J = power_nonlinearity(3.0);
  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  std::vector<double> diffs;
  for (std::size_t steps : {10u, 20u, 40u}) {
    EvolutionFamily coarse(fa, TimeGrid::uniform(1.0, steps));
    EvolutionFamily fine(fa, TimeGrid::uniform(1.0, 4 * steps));
    const auto p = picard_solve(phi, coarse, J, pack);
    const auto i = imex_reference(phi, fine, J, pack);
    REQUIRE(p.status == PicardStatus::converged);
    diffs.push_back(lp_norm(p.solution.u.back() - i.solution.u.back(), fa.mass(), 2.0));
  }
  for (std::size_t k = 1; k < diffs.size(); ++k)
    CHECK(diffs[k - 1] / diffs[k] == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("blow-up guard") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(0.01, 200));
  const Vector phi = Vector::Constant(fa.mass().size(), 20.0);
  const auto r = imex_reference(phi, fam, power_nonlinearity(3.0), pack, 1e6);
  CHECK(r.blew_up);
  CHECK(r.T_phi > 0.0);
  CHECK(r.T_phi < 0.01);

  PicardOptions opt;
  opt.allow_window_failure = true;
  const auto c = picard_continuation(phi, fam, power_nonlinearity(3.0), pack, opt, 5, 1e6);
  CHECK(c.status != PicardStatus::converged);
  CHECK(c.t_reached < 0.01);
}

TEST_CASE("continuation with zero nonlinearity reaches the horizon") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  const auto c = picard_continuation(phi, fam, zero_nonlinearity(3.0), pack, {}, 6);
  CHECK(c.status == PicardStatus::converged);
  CHECK(c.segments == 4);
  CHECK(c.t_reached == 1.0);
  REQUIRE(c.solution.u.size() == 21);
  CHECK((c.solution.u.back() - fam.propagate(phi, 0, 20)).norm() < 1e-13);
  CHECK_THROWS_AS(picard_continuation(phi, fam, zero_nonlinearity(3.0), pack, {}, 0), InvalidInput);
}

TEST_CASE("global small-data constants") {
  const auto pack = default_coefficients().pack;
  CHECK(pack.q == doctest::Approx(4.0));
  CHECK(smalldata_B(2.0 / 3.0, 1.0 / 6.0) == doctest::Approx(std::beta(1.0 / 3.0, 0.5)).epsilon(1e-8));
  CHECK(smalldata_B(0.4, 0.1) == doctest::Approx(std::beta(0.6, 0.3)).epsilon(1e-8));
  CHECK_THROWS_AS(smalldata_B(1.0, 0.1), HypothesisViolation);
  CHECK_THROWS_AS(smalldata_B(0.5, 0.5), HypothesisViolation);

  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const auto J = power_nonlinearity(3.0);
  const Vector zero = Vector::Zero(fa.mass().size());
  const auto z = picard_solve(zero, fam, J, pack);
  const auto gz = global_smalldata_check(zero, fam, J, pack, z.solution);
  CHECK(gz.f_max == 0.0);
  CHECK(gz.below_two_epsilon);

  const Vector phi = smooth_datum(fa.mesh(), 0.05);
  const auto s = picard_solve(phi, fam, J, pack);
  const auto g = global_smalldata_check(phi, fam, J, pack, s.solution);
  CHECK(g.Lambda == doctest::Approx(3.0));
  CHECK(g.B == doctest::Approx(g.B_beta).epsilon(1e-8));
  CHECK(g.below_two_epsilon);
  CHECK(g.margin > 1.0);
}
