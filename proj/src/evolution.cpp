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

#include "wentzell/evolution.hpp"

#include "wentzell/error.hpp"
#include "wentzell/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wentzell {

TimeGrid TimeGrid::uniform(double T, std::size_t steps) {
  if (!(T > 0.0) || steps == 0)
    throw InvalidInput("time grid needs T > 0 and at least one step");
  TimeGrid g;
  g.t.resize(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n)
    g.t[n] = T * static_cast<double>(n) / static_cast<double>(steps);
  return g;
}

std::size_t TimeGrid::index_of(double time) const {
  if (t.empty())
    throw InvalidInput("empty time grid");
  const double tol = 1e-9 * std::max(1.0, std::abs(t.back()));
  auto it = std::lower_bound(t.begin(), t.end(), time - tol);
  if (it == t.end() || std::abs(*it - time) > tol)
    throw InvalidInput("time " + std::to_string(time) + " is not a grid node");
  return static_cast<std::size_t>(it - t.begin());
}

EvolutionFamily::EvolutionFamily(const FormAssembler &fa, TimeGrid grid)
    : fa_(fa), grid_(std::move(grid)), M_(fa.mass()) {
  if (grid_.steps() == 0)
    throw InvalidInput("time grid has no steps");
  for (std::size_t n = 0; n < grid_.steps(); ++n)
    if (!(grid_.dt(n) > 0.0))
      throw InvalidInput("time grid must be strictly increasing");
  const double bytes = 8.0 * static_cast<double>(M_.size()) * static_cast<double>(M_.size());
  cache_limit_ = std::max<std::size_t>(4, static_cast<std::size_t>(4.0e8 / std::max(bytes, 1.0)));
}

EvolutionFamily::Factor EvolutionFamily::factor(std::size_t n) const {
  const double dt = grid_.dt(n);
  const double t1 = fa_.autonomous() ? 0.0 : grid_.t[n + 1];
  const std::pair key{t1, dt};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end())
      return it->second;
  }
  Matrix A = dt * fa_.energy(grid_.t[n + 1]);
  A.diagonal() += M_;
  auto f = std::make_shared<Eigen::LLT<Matrix>>(A);
  if (f->info() != Eigen::Success)
    throw NumericalFailure("coercivity", "backward-Euler matrix is not positive definite");
  std::lock_guard lock(mutex_);
  if (cache_.emplace(key, f).second) {
    order_.push_back(key);
    if (order_.size() > cache_limit_) {
      cache_.erase(order_.front());
      order_.erase(order_.begin());
    }
  }
  return f;
}

Vector EvolutionFamily::step(const Vector &u, std::size_t n) const {
  if (n >= grid_.steps())
    throw InvalidInput("step index out of range");
  return factor(n)->solve(M_.cwiseProduct(u));
}

Matrix EvolutionFamily::step_matrix(const Matrix &U, std::size_t n) const {
  if (n >= grid_.steps())
    throw InvalidInput("step index out of range");
  return factor(n)->solve(M_.asDiagonal() * U);
}

Vector EvolutionFamily::propagate(const Vector &phi, std::size_t k0, std::size_t k1) const {
  if (k0 > k1 || k1 > grid_.steps())
    throw InvalidInput("propagate needs k0 <= k1 <= steps");
  Vector u = phi;
  for (std::size_t n = k0; n < k1; ++n)
    u = step(u, n);
  return u;
}

Vector EvolutionFamily::propagate_times(const Vector &phi, double tau, double t) const {
  return propagate(phi, grid_.index_of(tau), grid_.index_of(t));
}

Matrix EvolutionFamily::propagator(std::size_t k0, std::size_t k1) const {
  if (k0 > k1 || k1 > grid_.steps())
    throw InvalidInput("propagator needs k0 <= k1 <= steps");
  Matrix U = Matrix::Identity(M_.size(), M_.size());
  for (std::size_t n = k0; n < k1; ++n)
    U = step_matrix(U, n);
  return U;
}

namespace {

// Visits U_h(t_k, 0) for each requested k, in increasing order.
template <class F>
void sweep(const EvolutionFamily &fam, std::vector<std::size_t> indices, F &&visit) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (!indices.empty() && indices.back() > fam.grid().steps())
    throw InvalidInput("grid index out of range");
  const auto n = fam.mass().size();
  Matrix U = Matrix::Identity(n, n);
  std::size_t k = 0;
  for (std::size_t target : indices) {
    for (; k < target; ++k)
      U = fam.step_matrix(U, k);
    visit(target, U);
  }
}

Vector random_vector(std::mt19937_64 &rng, Eigen::Index n, bool nonnegative) {
  std::uniform_real_distribution<double> d(nonnegative ? 0.0 : -1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = d(rng);
  return v;
}

} // namespace

ContractionReport lp_contraction_check(const EvolutionFamily &fam, double p,
                                       const std::vector<std::size_t> &indices, int trials,
                                       std::uint64_t seed) {
  const bool inf = std::isinf(p);
  if (!inf && p != 1.0 && p != 2.0)
    throw InvalidInput("contraction check supports p in {1, 2, inf}");
  ContractionReport r;
  r.p = p;
  const Vector &m = fam.mass();
  std::mt19937_64 rng(seed);
  sweep(fam, indices, [&](std::size_t k, const Matrix &U) {
    const double nrm = inf ? op_norm_inf(U) : p == 1.0 ? op_norm_1(U, m) : op_norm_2(U, m);
    if (nrm > r.max_norm) {
      r.max_norm = nrm;
      r.worst_t = fam.grid().t[k];
    }
    for (int i = 0; i < trials; ++i) {
      const Vector phi = random_vector(rng, m.size(), false);
      const double den = lp_norm(phi, m, p);
      if (den > 0.0)
        r.max_random = std::max(r.max_random, lp_norm(U * phi, m, p) / den);
    }
  });
  return r;
}

PositivityReport positivity_check(const EvolutionFamily &fam,
                                  const std::vector<std::size_t> &indices, int trials,
                                  std::uint64_t seed) {
  PositivityReport r;
  r.worst_random = std::numeric_limits<double>::infinity();
  r.worst_explicit = 0.0;
  r.min_entry = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  const auto n = fam.mass().size();
  sweep(fam, indices, [&](std::size_t, const Matrix &U) {
    r.min_entry = std::min(r.min_entry, U.minCoeff());
    const Vector neg = U.cwiseMin(0.0).rowwise().sum();
    r.worst_explicit = std::min(r.worst_explicit, neg.minCoeff());
    for (int i = 0; i < trials; ++i) {
      const Vector phi = random_vector(rng, n, true);
      const double den = phi.maxCoeff();
      if (den > 0.0)
        r.worst_random = std::min(r.worst_random, (U * phi).minCoeff() / den);
    }
  });
  if (!std::isfinite(r.worst_random))
    r.worst_random = 0.0;
  return r;
}

} // namespace wentzell
