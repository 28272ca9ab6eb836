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
#include "wentzell/evolution.hpp"
#include "wentzell/norms.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace wentzell;

namespace {

CoefficientSet sinusoidal() {
  CoefficientSet c = default_coefficients();
  c.K = sinusoidal_pair(0.25, c.pack.T, c.pack.eta);
  c.zeta = sinusoidal_pair(0.5, c.pack.T, c.pack.eta);
  c.b = sinusoidal_point(1.0, 0.5, c.pack.T, c.pack.eta);
  return c;
}

// Backward Euler through explicit inverses, independent of the cached factorizations.
Matrix euler_oracle(const FormAssembler &fa, const TimeGrid &g, std::size_t k0, std::size_t k1) {
  const Vector &m = fa.mass();
  Matrix U = Matrix::Identity(m.size(), m.size());
  for (std::size_t n = k0; n < k1; ++n) {
    Matrix A = g.dt(n) * fa.energy(g.t[n + 1]);
    A.diagonal() += m;
    U = A.fullPivLu().inverse() * m.asDiagonal() * U;
  }
  return U;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  Vector field(Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (auto &x : v)
      x = d(rng);
    return v;
  }
  std::size_t index(std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi)(rng); }
};

} // namespace

TEST_CASE("time grid") {
  const auto g = TimeGrid::uniform(1.0, 10);
  CHECK(g.steps() == 10);
  CHECK(g.index_of(0.3) == 3);
  CHECK(g.index_of(1.0) == 10);
  CHECK_THROWS_AS(g.index_of(0.35), InvalidInput);
  CHECK_THROWS_AS(g.index_of(1.5), InvalidInput);
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 4), InvalidInput);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), InvalidInput);
}

TEST_CASE("propagator matches explicit backward Euler") {
  for (bool variable : {false, true}) {
    FormAssembler fa(build_unit_square_mesh(0.25), variable ? sinusoidal() : default_coefficients());
    const auto g = TimeGrid::uniform(0.5, 8);
    EvolutionFamily fam(fa, g);
    const Matrix U = fam.propagator(2, 7);
    const Matrix O = euler_oracle(fa, g, 2, 7);
    CHECK((U - O).cwiseAbs().maxCoeff() < 1e-12 * O.cwiseAbs().maxCoeff());
    Gen gen(11);
    const Vector phi = gen.field(fa.mass().size(), -1.0, 1.0);
    CHECK((fam.propagate(phi, 2, 7) - O * phi).norm() < 1e-12 * phi.norm());
    CHECK((fam.propagate_times(phi, g.t[2], g.t[7]) - O * phi).norm() < 1e-12 * phi.norm());
  }
}

TEST_CASE("identity and composition") {
  FormAssembler fa(build_unit_square_mesh(0.25), sinusoidal());
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 12));
  const auto n = fa.mass().size();
  CHECK(fam.propagator(5, 5).isApprox(Matrix::Identity(n, n)));
  Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t a = gen.index(12), b = gen.index(12), c = gen.index(12);
    if (a > b)
      std::swap(a, b);
    if (b > c)
      std::swap(b, c);
    if (a > b)
      std::swap(a, b);
    const Vector phi = gen.field(static_cast<Eigen::Index>(n), -1.0, 1.0);
    const Vector direct = fam.propagate(phi, a, c);
    const Vector split = fam.propagate(fam.propagate(phi, a, b), b, c);
    CHECK((direct - split).norm() <= 1e-12 * std::max(1.0, direct.norm()));
  }
  CHECK_THROWS_AS(fam.propagate(Vector::Ones(n), 4, 2), InvalidInput);
  CHECK_THROWS_AS(fam.step(Vector::Ones(n), 12), InvalidInput);
}

TEST_CASE("contraction in l^1, l^2 and l^inf") {
  for (bool variable : {false, true}) {
    FormAssembler fa(build_unit_square_mesh(0.125), variable ? sinusoidal() : default_coefficients());
    EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 40));
    const std::vector<std::size_t> idx{1, 2, 5, 10, 20, 40};
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const auto r = lp_contraction_check(fam, p, idx, 10, 7);
      CAPTURE(p);
      CHECK(r.max_norm <= 1.0 + 1e-10);
      CHECK(r.max_random <= 1.0 + 1e-10);
      CHECK(r.max_norm > 0.0);
    }
    CHECK_THROWS_AS(lp_contraction_check(fam, 3.0, idx, 1, 1), InvalidInput);
  }
}

TEST_CASE("positivity") {
  for (bool variable : {false, true}) {
    FormAssembler fa(build_unit_square_mesh(0.125), variable ? sinusoidal() : default_coefficients());
    EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 40));
    const auto r = positivity_check(fam, {1, 3, 10, 40}, 20, 5);
    CHECK(r.min_entry >= -1e-14);
    CHECK(r.worst_explicit >= -1e-14);
    CHECK(r.worst_random >= -1e-14);
  }
}

TEST_CASE("constants are preserved only up to the boundary loss") {
  // Without boundary potential, U 1 = 1; with b > 0 the mass strictly decreases.
  CoefficientSet c = default_coefficients();
  FormAssembler fa(build_unit_square_mesh(0.25), c);
  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 10));
  const Vector m = fa.mass();
  const Vector one = Vector::Ones(m.size());
  double prev = m.sum();
  for (std::size_t k = 1; k <= 10; ++k) {
    const double mass = m.dot(fam.propagate(one, 0, k));
    CHECK(mass < prev);
    prev = mass;
  }
}

TEST_CASE("spectrum is M-orthonormal") {
  FormAssembler fa(build_unit_square_mesh(0.25), default_coefficients());
  const Matrix E = fa.energy(0.0);
  const Vector &m = fa.mass();
  const auto sp = spectrum(E, m);
  const auto n = m.size();
  CHECK((sp.V.transpose() * m.asDiagonal() * sp.V - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((E * sp.V - m.asDiagonal() * sp.V * sp.lambda.asDiagonal()).cwiseAbs().maxCoeff() <
        1e-9 * sp.lambda.maxCoeff());
  CHECK(sp.lambda.minCoeff() > 0.0);

  EvolutionFamily fam(fa, TimeGrid::uniform(1.0, 20));
  const double dt = 0.05;
  const Vector f = (1.0 + dt * sp.lambda.array()).pow(-6.0).matrix();
  const Matrix Us = sp.V * f.asDiagonal() * sp.V.transpose() * m.asDiagonal();
  CHECK((Us - fam.propagator(0, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("weighted norms") {
  const Vector m = (Vector(3) << 0.5, 1.0, 2.0).finished();
  const Vector u = (Vector(3) << 1.0, -2.0, 0.5).finished();
  CHECK(lp_norm(u, m, 1.0) == doctest::Approx(0.5 + 2.0 + 1.0));
  CHECK(lp_norm(u, m, 2.0) == doctest::Approx(std::sqrt(0.5 + 4.0 + 0.5)));
  CHECK(lp_norm(u, m, std::numeric_limits<double>::infinity()) == 2.0);

  // Rank one U = a b^T: ||U||_{2 -> q} = ||a||_q ||b / m||_{2(m)}.
  const Vector a = (Vector(3) << 1.0, 0.3, -0.2).finished();
  const Vector b = (Vector(3) << 0.4, -1.0, 0.7).finished();
  const Matrix U = a * b.transpose();
  for (double q : {2.0, 3.0, 6.0}) {
    CAPTURE(q);
    const double expect = lp_norm(a, m, q) * lp_norm(b.cwiseQuotient(m), m, 2.0);
    CHECK(op_norm_2_q(U, m, q) == doctest::Approx(expect).epsilon(1e-8));
  }
  CHECK(op_norm_1_inf(U, m) == doctest::Approx((U.cwiseAbs() * m.cwiseInverse().asDiagonal()).maxCoeff()));

  // Brute force over directions for a full 2x2 operator.
  const Vector m2 = (Vector(2) << 0.7, 1.3).finished();
  const Matrix A = (Matrix(2, 2) << 0.9, 0.2, -0.4, 0.6).finished();
  for (double q : {2.0, 4.0}) {
    double best = 0.0;
    for (int i = 0; i < 200000; ++i) {
      const double th = M_PI * i / 200000.0;
      const Vector v = (Vector(2) << std::cos(th) / std::sqrt(m2[0]), std::sin(th) / std::sqrt(m2[1])).finished();
      best = std::max(best, lp_norm(A * v, m2, q));
    }
    CHECK(op_norm_2_q(A, m2, q) == doctest::Approx(best).epsilon(1e-8));
  }
  CHECK(op_norm_2(A, m2) == doctest::Approx(op_norm_2_q(A, m2, 2.0)).epsilon(1e-8));
}

TEST_CASE("power-law fit and windows") {
  std::vector<double> t, v;
  for (int i = 0; i < 6; ++i) {
    t.push_back(0.01 * std::pow(2.0, i));
    v.push_back(3.0 * std::pow(t.back(), -1.7));
  }
  const auto f = fit_power_law(t, v);
  CHECK(f.exponent == doctest::Approx(1.7));
  CHECK(f.prefactor == doctest::Approx(3.0));
  CHECK(f.residual < 1e-12);
  CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, -1.0}), InvalidInput);

  const auto g = TimeGrid::uniform(1.0, 1000);
  const auto idx = window_indices(g, 0.01, 0.1, 6);
  CHECK(idx.front() == 10);
  CHECK(idx.back() == 100);
  CHECK_THROWS_AS(window_indices(g, 0.01, 0.03, 6), InvalidInput);
  CHECK_THROWS_AS(window_indices(g, 0.0, 0.1, 6), InvalidInput);
}

TEST_CASE("smoothing fits agree across the spectral and explicit routes") {
  // A perturbed first node forces the explicit route.
  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  auto g = TimeGrid::uniform(1.0, 200);
  EvolutionFamily spectral(fa, g);
  g.t[1] += 1e-9;
  EvolutionFamily explicit_route(fa, g);
  const auto a = ultracontractivity_fit(spectral, 0.05, 0.5, 5);
  const auto b = ultracontractivity_fit(explicit_route, 0.05, 0.5, 5);
  CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-4));
  CHECK(a.exponent > 0.0);
  const auto c = interpolated_smoothing_fit(spectral, 3.0, 0.05, 0.5, 3);
  const auto d = interpolated_smoothing_fit(explicit_route, 3.0, 0.05, 0.5, 3);
  CHECK(c.exponent == doctest::Approx(d.exponent).epsilon(1e-4));
  CHECK_THROWS_AS(interpolated_smoothing_fit(spectral, 1.0, 0.05, 0.5, 3), InvalidInput);
}

TEST_CASE("fractional power bound") {
  std::vector<double> taus;
  for (int i = 0; i <= 400; ++i)
    taus.push_back(1e-4 * std::pow(1e5, i / 400.0));
  const Vector single = (Vector(1) << 1.0).finished();
  auto r = fractional_power_check(single, 0.5, taus, 0.75);
  CHECK(r.envelope == doctest::Approx(1.0 / std::sqrt(2.0 * std::exp(1.0))));
  CHECK(r.sup_scaled <= r.envelope + 1e-12);
  CHECK(r.sup_scaled > r.envelope - 1e-3);
  CHECK(r.warnings.empty());

  FormAssembler fa(build_unit_square_mesh(0.125), default_coefficients());
  const auto sp = spectrum(fa.energy(0.0), fa.mass());
  r = fractional_power_check(sp.lambda, 0.5, taus, 0.75);
  CHECK(r.sup_scaled <= 1.0 / std::sqrt(2.0 * std::exp(1.0)) + 1e-6);
  const auto r0 = fractional_power_check(sp.lambda, 0.0, taus, 0.75);
  CHECK(r0.sup_scaled <= 1.0);
  CHECK(fractional_power_check(sp.lambda, 1.3, taus, 0.75).warnings.size() == 1);
  CHECK_THROWS_AS(fractional_power_check(sp.lambda, -0.1, taus, 0.75), InvalidInput);
}

TEST_CASE("fractional difference envelope") {
  for (double xi : {0.25, 0.5, 0.75}) {
    double best = 0.0;
    for (int i = 0; i < 400000; ++i) {
      const double x = 1e-6 + 20.0 * i / 400000.0;
      best = std::max(best, -std::expm1(-x) * std::pow(x, -xi));
    }
    const Vector single = (Vector(1) << 2.0).finished();
    const auto r = fractional_difference_check(single, xi, {0.1, 0.5, 1.0});
    CAPTURE(xi);
    CHECK(r.envelope == doctest::Approx(best).epsilon(1e-6));
    CHECK(r.sup_scaled <= r.envelope + 1e-12);
  }
  const auto sp = spectrum(FormAssembler(build_unit_square_mesh(0.25), default_coefficients()).energy(0.0),
                           FormAssembler(build_unit_square_mesh(0.25), default_coefficients()).mass());
  std::vector<double> taus;
  for (int i = 0; i <= 40; ++i)
    taus.push_back(1e-3 * std::pow(1e3, i / 40.0));
  const auto r = fractional_difference_check(sp.lambda, 0.5, taus);
  CHECK(r.sup_scaled <= r.envelope + 1e-12);
  CHECK_THROWS_AS(fractional_difference_check(sp.lambda, 1.0, taus), InvalidInput);
}
