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

#include "wentzell/semilinear.hpp"

#include "wentzell/error.hpp"
#include "wentzell/norms.hpp"
#include "wentzell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wentzell {

Vector Nonlinearity::operator()(const Vector &u) const {
  Vector out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    out[i] = f(u[i]);
  return out;
}

Nonlinearity power_nonlinearity(double p) {
  if (!(p > 1.0))
    throw InvalidInput("power nonlinearity needs p > 1");
  Nonlinearity J;
  J.name = "power";
  J.p = p;
  J.f = [p](double u) { return std::pow(std::abs(u), p - 1.0) * u; };
  J.lipschitz = [p](double r) { return p * std::pow(r, p - 1.0); };
  return J;
}

Nonlinearity zero_nonlinearity(double p) {
  Nonlinearity J;
  J.name = "zero";
  J.p = p;
  J.f = [](double) { return 0.0; };
  J.lipschitz = [](double) { return 0.0; };
  return J;
}

double lipschitz_sample_ratio(const Nonlinearity &J, const Vector &m, double r, int pairs,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), R(0.0, 1.0);
  const double q = 2.0 * J.p;
  auto draw = [&] {
    Vector v(m.size());
    for (auto &x : v)
      x = U(rng);
    return Vector(v * (r * R(rng) / lp_norm(v, m, q)));
  };
  const double l = J.lipschitz(r);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Vector u = draw(), v = draw();
    const double den = lp_norm(u - v, m, q);
    if (den > 0.0 && l > 0.0)
      worst = std::max(worst, lp_norm(J(u) - J(v), m, 2.0) / (l * den));
  }
  return worst;
}

GrowthReport growth_condition_check(const Nonlinearity &J, const ExponentPack &pack) {
  return growth_condition_check(J.lipschitz, pack.a, pack.b_w);
}

MildIterate make_iterate(std::vector<double> t, std::vector<Vector> u, const Vector &m,
                         double p, double b_w) {
  MildIterate it;
  it.t = std::move(t);
  it.u = std::move(u);
  for (std::size_t j = 0; j < it.u.size(); ++j) {
    it.plain_norm = std::max(it.plain_norm, lp_norm(it.u[j], m, 2.0));
    if (j > 0)
      it.weighted_norm = std::max(
          it.weighted_norm, std::pow(it.t[j] - it.t[0], b_w) * lp_norm(it.u[j], m, 2.0 * p));
  }
  return it;
}

double y_distance(const MildIterate &a, const MildIterate &b, const Vector &m, double p,
                  double b_w) {
  if (a.u.size() != b.u.size())
    throw InvalidInput("iterates live on different grids");
  double plain = 0.0, weighted = 0.0;
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    const Vector d = a.u[j] - b.u[j];
    plain = std::max(plain, lp_norm(d, m, 2.0));
    if (j > 0)
      weighted = std::max(weighted, std::pow(a.t[j] - a.t[0], b_w) * lp_norm(d, m, 2.0 * p));
  }
  return std::max(plain, weighted);
}

namespace {

std::size_t horizon_index(const TimeGrid &g, double T_bar) {
  return T_bar > 0.0 ? g.index_of(T_bar) : g.steps();
}

WindowReport window_from(const Vector &phi, const EvolutionFamily &fam, const ExponentPack &pack,
                         double kappa, std::size_t k0, std::size_t k1) {
  if (!(kappa > 0.0))
    throw InvalidInput("window check needs kappa > 0");
  const auto &t = fam.grid().t;
  WindowReport w;
  w.kappa = kappa;
  w.T_bar = t[k1];
  w.phi_q_norm = lp_norm(phi, fam.mass(), pack.q);
  const double first = t[k0 + 1] - t[k0];
  Vector u = phi;
  for (std::size_t k = k0 + 1; k <= k1 && t[k] - t[k0] <= 10.0 * first * (1 + 1e-12); ++k) {
    u = fam.step(u, k - 1);
    w.measured = std::max(w.measured,
                          std::pow(t[k] - t[k0], pack.b_w) * lp_norm(u, fam.mass(), 2.0 * pack.p));
  }
  w.pass = w.measured < kappa;
  return w;
}

MildIterate map_range(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                      const std::vector<Vector> &w, std::size_t k0, std::size_t k1,
                      const ExponentPack &pack) {
  // F_j = step(F_{j-1}) + dt J(w_j) reproduces U(t_j,t_0) phi plus the right-endpoint
  // Duhamel sum exactly, one solve per node.
  const auto &t = fam.grid().t;
  std::vector<Vector> out(k1 - k0 + 1);
  out[0] = phi;
  for (std::size_t k = k0 + 1; k <= k1; ++k) {
    const std::size_t j = k - k0;
    out[j] = fam.step(out[j - 1], k - 1) + fam.grid().dt(k - 1) * J(w[j]);
  }
  return make_iterate({t.begin() + static_cast<std::ptrdiff_t>(k0),
                       t.begin() + static_cast<std::ptrdiff_t>(k1) + 1},
                      std::move(out), fam.mass(), pack.p, pack.b_w);
}

bool finite(const MildIterate &w) {
  for (const auto &u : w.u)
    if (!u.allFinite())
      return false;
  return true;
}

PicardResult picard_range(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                          const ExponentPack &pack, const PicardOptions &opt, std::size_t k0,
                          std::size_t k1) {
  if (!(opt.tol > 0.0) || opt.max_iter < 1)
    throw InvalidInput("picard needs tol > 0 and max_iter >= 1");
  if (phi.size() != fam.mass().size())
    throw InvalidInput("initial datum has the wrong size");
  PicardResult r;
  r.window = window_from(phi, fam, pack, opt.kappa, k0, k1);
  if (!r.window.pass && !opt.allow_window_failure) {
    r.status = PicardStatus::window_failed;
    r.message = "initial window check failed: measured " + std::to_string(r.window.measured) +
                " >= kappa " + std::to_string(opt.kappa);
    return r;
  }
  const Vector &m = fam.mass();
  std::vector<Vector> seed(k1 - k0 + 1, Vector::Zero(m.size()));
  seed[0] = phi;
  MildIterate w = map_range(phi, fam, zero_nonlinearity(J.p), seed, k0, k1, pack);
  if (!opt.linear_seed)
    w = make_iterate(w.t, seed, m, pack.p, pack.b_w);

  r.status = PicardStatus::non_contraction;
  for (int it = 1; it <= opt.max_iter; ++it) {
    MildIterate next = map_range(phi, fam, J, w.u, k0, k1, pack);
    const double d = y_distance(next, w, m, pack.p, pack.b_w);
    r.distances.push_back(d);
    w = std::move(next);
    r.iterations = it;
    if (!finite(w) || !std::isfinite(d)) {
      r.message = "iterates diverged";
      break;
    }
    if (r.window.pass && w.weighted_norm >= 2.0 * opt.kappa) {
      r.status = PicardStatus::leaves_Y;
      r.message = "weighted norm " + std::to_string(w.weighted_norm) + " reached 2 kappa";
      break;
    }
    if (d < opt.tol) {
      r.status = PicardStatus::converged;
      break;
    }
  }
  if (r.status == PicardStatus::non_contraction && r.message.empty())
    r.message = "no convergence after " + std::to_string(opt.max_iter) + " iterations";

  const double floor = 1e-13 * std::max(1.0, w.plain_norm);
  for (std::size_t k = 1; k < r.distances.size(); ++k)
    if (r.distances[k] > floor && r.distances[k - 1] > 0.0)
      r.contraction_ratio = std::max(r.contraction_ratio, r.distances[k] / r.distances[k - 1]);
  if (finite(w))
    r.residual = y_distance(map_range(phi, fam, J, w.u, k0, k1, pack), w, m, pack.p, pack.b_w);
  else
    r.residual = std::numeric_limits<double>::infinity();
  r.solution = std::move(w);
  return r;
}

} // namespace

WindowReport initial_window_check(const Vector &phi, const EvolutionFamily &fam,
                                  const ExponentPack &pack, double kappa, double T_bar) {
  return window_from(phi, fam, pack, kappa, 0, horizon_index(fam.grid(), T_bar));
}

std::string to_string(PicardStatus s) {
  switch (s) {
  case PicardStatus::converged:
    return "converged";
  case PicardStatus::non_contraction:
    return "non-contraction";
  case PicardStatus::leaves_Y:
    return "leaves-Y";
  case PicardStatus::window_failed:
    return "window-failed";
  case PicardStatus::blow_up:
    return "blow-up";
  }
  return "unknown";
}

PicardResult picard_solve(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                          const ExponentPack &pack, const PicardOptions &opt) {
  return picard_range(phi, fam, J, pack, opt, 0, horizon_index(fam.grid(), opt.T_bar));
}

MildIterate picard_map(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                       const MildIterate &w, std::size_t k0, const ExponentPack &pack) {
  if (w.u.empty() || k0 + w.u.size() - 1 > fam.grid().steps())
    throw InvalidInput("iterate does not fit the grid");
  return map_range(phi, fam, J, w.u, k0, k0 + w.u.size() - 1, pack);
}

ContinuationResult picard_continuation(const Vector &phi, const EvolutionFamily &fam,
                                       const Nonlinearity &J, const ExponentPack &pack,
                                       const PicardOptions &opt, std::size_t segment_steps,
                                       double blowup_cap) {
  if (segment_steps == 0)
    throw InvalidInput("continuation needs segment_steps >= 1");
  const std::size_t end = fam.grid().steps();
  ContinuationResult c;
  std::vector<double> ts{fam.grid().t[0]};
  std::vector<Vector> us{phi};
  Vector start = phi;
  std::size_t k0 = 0;
  while (k0 < end) {
    const std::size_t k1 = std::min(end, k0 + segment_steps);
    PicardResult r = picard_range(start, fam, J, pack, opt, k0, k1);
    ++c.segments;
    c.status = r.status;
    if (r.status != PicardStatus::converged) {
      c.message = r.message;
      break;
    }
    for (std::size_t j = 1; j < r.solution.u.size(); ++j) {
      ts.push_back(r.solution.t[j]);
      us.push_back(r.solution.u[j]);
    }
    c.t_reached = fam.grid().t[k1];
    start = us.back();
    if (!start.allFinite() || start.cwiseAbs().maxCoeff() > blowup_cap) {
      c.status = PicardStatus::blow_up;
      c.message = "blow-up guard at t = " + std::to_string(c.t_reached);
      break;
    }
    k0 = k1;
  }
  c.solution = make_iterate(std::move(ts), std::move(us), fam.mass(), pack.p, pack.b_w);
  return c;
}

ImexResult imex_reference(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                          const ExponentPack &pack, double blowup_cap) {
  if (phi.size() != fam.mass().size())
    throw InvalidInput("initial datum has the wrong size");
  const auto &g = fam.grid();
  std::vector<double> ts{g.t[0]};
  std::vector<Vector> us{phi};
  ImexResult r;
  for (std::size_t n = 0; n < g.steps(); ++n) {
    const Vector &u = us.back();
    Vector next = fam.step(u + g.dt(n) * J(u), n);
    const bool blown = !next.allFinite() || next.cwiseAbs().maxCoeff() > blowup_cap;
    ts.push_back(g.t[n + 1]);
    us.push_back(std::move(next));
    if (blown) {
      r.blew_up = true;
      r.T_phi = g.t[n + 1];
      break;
    }
  }
  r.solution = make_iterate(std::move(ts), std::move(us), fam.mass(), pack.p, pack.b_w);
  return r;
}

double smalldata_B(double a, double b_w) {
  std::vector<std::string> bad;
  if (!(a < 1.0))
    bad.push_back("a < 1 violated");
  if (!(b_w < a))
    bad.push_back("b_w < a violated");
  if (!bad.empty())
    throw HypothesisViolation(bad);
  // Split at 1/2 and absorb each endpoint singularity into a Jacobi weight.
  const double e0 = a - 1.0 - b_w, e1 = -a;
  const auto left = quad::gauss_jacobi01(40, e0);
  const auto right = quad::gauss_jacobi01(40, e1);
  double B = 0.0;
  for (std::size_t i = 0; i < left.size(); ++i)
    B += std::pow(0.5, e0 + 1.0) * left.w[i] * std::pow(1.0 - 0.5 * left.x[i], e1);
  for (std::size_t i = 0; i < right.size(); ++i)
    B += std::pow(0.5, e1 + 1.0) * right.w[i] * std::pow(1.0 - 0.5 * right.x[i], e0);
  return B;
}

GlobalReport global_smalldata_check(const Vector &phi, const EvolutionFamily &fam,
                                    const Nonlinearity &J, const ExponentPack &pack,
                                    const MildIterate &solution) {
  GlobalReport g;
  g.B = smalldata_B(pack.a, pack.b_w);
  g.B_beta = std::beta(1.0 - pack.a, pack.a - pack.b_w);
  g.q = pack.q;
  const Vector &m = fam.mass();
  g.phi_q_norm = lp_norm(phi, m, g.q);
  const auto &t = fam.grid().t;
  Vector u = phi;
  for (std::size_t k = 1; k < t.size(); ++k) {
    u = fam.step(u, k - 1);
    if (g.phi_q_norm > 0.0)
      g.M = std::max(g.M, std::pow(t[k] - t[0], pack.b_w) * lp_norm(u, m, 2.0 * pack.p) /
                              g.phi_q_norm);
  }
  g.epsilon = g.M * g.phi_q_norm;
  g.f_max = solution.weighted_norm;
  g.below_two_epsilon = g.phi_q_norm == 0.0 ? g.f_max == 0.0 : g.f_max < 2.0 * g.epsilon;
  const double e = (1.0 - pack.a) / pack.b_w;
  for (int i = 0; i <= 60; ++i) {
    const double r = std::pow(10.0, 6.0 * i / 60.0);
    g.Lambda = std::max(g.Lambda, J.lipschitz(r) / std::pow(r, e));
  }
  const double c = std::pow(2.0, (1.0 - pack.a + pack.b_w) / pack.b_w) * g.Lambda * g.B * g.M;
  g.epsilon_star = c > 0.0 ? std::pow(c, -1.0 / e) : std::numeric_limits<double>::infinity();
  g.margin = g.epsilon > 0.0 ? g.epsilon_star / g.epsilon : std::numeric_limits<double>::infinity();
  return g;
}

PowerFit hoelder_regularity_fit(const MildIterate &u, const Vector &m, double p, double eps) {
  const std::size_t n = u.u.size();
  std::size_t first = 0;
  while (first < n && u.t[first] - u.t[0] < eps)
    ++first;
  if (first + 8 > n)
    throw InvalidInput("hoelder fit needs at least eight nodes after eps");
  const std::size_t span = n - first;
  std::vector<double> sig, val;
  for (std::size_t j = 1; j <= span / 4; j = std::max(j + 1, j * 3 / 2)) {
    double worst = 0.0;
    for (std::size_t k = first; k + j < n; ++k)
      worst = std::max(worst, lp_norm(u.u[k + j] - u.u[k], m, 2.0 * p));
    if (worst > 0.0) {
      sig.push_back(u.t[first + j] - u.t[first]);
      val.push_back(worst);
    }
  }
  auto f = fit_power_law(sig, val);
  f.exponent = -f.exponent; // report gamma in sigma^gamma
  return f;
}

} // namespace wentzell
