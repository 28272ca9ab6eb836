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

#include "wentzell/error.hpp"
#include "wentzell/evolution.hpp"
#include "wentzell/norms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

namespace wentzell {

Spectrum spectrum(const Matrix &E, const Vector &M) {
  if (E.rows() != M.size() || E.cols() != M.size())
    throw InvalidInput("spectrum: size mismatch");
  const Vector r = M.cwiseSqrt().cwiseInverse();
  const Matrix C = r.asDiagonal() * E * r.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (C + C.transpose()));
  if (es.info() != Eigen::Success)
    throw NumericalFailure("spectrum", "eigensolver did not converge");
  return {es.eigenvalues(), r.asDiagonal() * es.eigenvectors()};
}

PowerFit fit_power_law(const std::vector<double> &t, const std::vector<double> &v) {
  if (t.size() != v.size() || t.size() < 2)
    throw InvalidInput("power-law fit needs at least two samples");
  const auto n = static_cast<double>(t.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0))
      throw InvalidInput("power-law fit needs positive samples");
    const double x = std::log(t[i]), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0))
    throw InvalidInput("power-law fit needs distinct times");
  const double slope = (n * sxy - sx * sy) / den;
  const double icept = (sy - slope * sx) / n;
  PowerFit f;
  f.t = t;
  f.value = v;
  f.exponent = -slope;
  f.prefactor = std::exp(icept);
  double ss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::log(v[i]) - (icept + slope * std::log(t[i]));
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::vector<std::size_t> window_indices(const TimeGrid &grid, double t_lo, double t_hi,
                                        std::size_t samples) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || t_hi / t_lo < std::sqrt(10.0))
    throw InvalidInput("fit window must span at least half a decade");
  if (samples < 2)
    throw InvalidInput("fit window needs at least two samples");
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < samples; ++i) {
    const double target =
        t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(samples - 1));
    auto it = std::lower_bound(grid.t.begin(), grid.t.end(), target);
    std::size_t k = static_cast<std::size_t>(it - grid.t.begin());
    if (k > 0 && (k == grid.t.size() || target - grid.t[k - 1] < grid.t[k] - target))
      --k;
    if (grid.t[k] >= t_lo * (1 - 1e-12) && grid.t[k] <= t_hi * (1 + 1e-12) && k > 0)
      out.insert(k);
  }
  if (out.size() < 2)
    throw InvalidInput("fit window contains fewer than two grid nodes");
  return {out.begin(), out.end()};
}

namespace {

bool uniform_steps(const TimeGrid &g) {
  for (std::size_t n = 1; n < g.steps(); ++n)
    if (std::abs(g.dt(n) - g.dt(0)) > 1e-12 * g.dt(0))
      return false;
  return true;
}

// Calls visit(k, U) with U = U_h(t_k, 0). Autonomous families on uniform grids use
// U = V diag((1 + dt lambda)^{-k}) V^T M.
template <class F>
void visit_propagators(const EvolutionFamily &fam, const std::vector<std::size_t> &idx,
                       const Spectrum *sp, F &&visit) {
  const Vector &m = fam.mass();
  if (sp) {
    const double dt = fam.grid().dt(0);
    for (std::size_t k : idx) {
      const Vector f = (1.0 + dt * sp->lambda.array()).pow(-static_cast<double>(k)).matrix();
      visit(k, Matrix(sp->V * f.asDiagonal() * sp->V.transpose() * m.asDiagonal()));
    }
    return;
  }
  std::size_t k = 0;
  Matrix U = Matrix::Identity(m.size(), m.size());
  for (std::size_t target : idx) {
    for (; k < target; ++k)
      U = fam.step_matrix(U, k);
    visit(target, U);
  }
}

bool spectral_route(const EvolutionFamily &fam) {
  return fam.assembler().autonomous() && uniform_steps(fam.grid());
}

} // namespace

PowerFit ultracontractivity_fit(const EvolutionFamily &fam, double t_lo, double t_hi,
                                std::size_t samples) {
  const auto idx = window_indices(fam.grid(), t_lo, t_hi, samples);
  std::vector<double> ts, vs;
  if (spectral_route(fam)) {
    // U M^{-1} is symmetric positive definite, so its largest entry sits on the diagonal.
    const Spectrum sp = spectrum(fam.assembler().energy(0.0), fam.mass());
    const Matrix V2 = sp.V.cwiseAbs2();
    const double dt = fam.grid().dt(0);
    for (std::size_t k : idx) {
      const Vector f = (1.0 + dt * sp.lambda.array()).pow(-static_cast<double>(k)).matrix();
      ts.push_back(fam.grid().t[k]);
      vs.push_back((V2 * f).maxCoeff());
    }
  } else {
    visit_propagators(fam, idx, nullptr, [&](std::size_t k, const Matrix &U) {
      ts.push_back(fam.grid().t[k]);
      vs.push_back(op_norm_1_inf(U, fam.mass()));
    });
  }
  return fit_power_law(ts, vs);
}

PowerFit interpolated_smoothing_fit(const EvolutionFamily &fam, double p, double t_lo,
                                    double t_hi, std::size_t samples) {
  if (!(p > 1.0))
    throw InvalidInput("interpolated smoothing needs p > 1");
  const auto idx = window_indices(fam.grid(), t_lo, t_hi, samples);
  std::unique_ptr<Spectrum> sp;
  if (spectral_route(fam))
    sp = std::make_unique<Spectrum>(spectrum(fam.assembler().energy(0.0), fam.mass()));
  std::vector<double> ts, vs;
  visit_propagators(fam, idx, sp.get(), [&](std::size_t k, const Matrix &U) {
    ts.push_back(fam.grid().t[k]);
    vs.push_back(op_norm_2_q(U, fam.mass(), 2.0 * p));
  });
  return fit_power_law(ts, vs);
}

FractionalPowerReport fractional_power_check(const Vector &lambda, double theta,
                                             const std::vector<double> &taus, double eta) {
  if (theta < 0.0)
    throw InvalidInput("fractional power needs theta >= 0");
  if (taus.empty())
    throw InvalidInput("fractional power check needs sample times");
  FractionalPowerReport r;
  r.theta = theta;
  if (theta >= eta + 0.5)
    r.warnings.push_back("theta < eta + 1/2 violated; bound computed outside its stated range");
  r.envelope = theta == 0.0 ? 1.0 : std::pow(theta / std::exp(1.0), theta);
  std::vector<double> ts, vs;
  for (double tau : taus) {
    if (!(tau > 0.0))
      throw InvalidInput("fractional power check needs tau > 0");
    double v = 0.0;
    for (double l : lambda)
      v = std::max(v, std::pow(std::max(l, 0.0), theta) * std::exp(-tau * l));
    r.sup_scaled = std::max(r.sup_scaled, std::pow(tau, theta) * v);
    ts.push_back(tau);
    vs.push_back(v);
  }
  if (theta > 0.0 && ts.size() >= 2)
    r.fit = fit_power_law(ts, vs);
  return r;
}

DifferenceReport fractional_difference_check(const Vector &lambda, double xi,
                                             const std::vector<double> &taus) {
  if (!(xi > 0.0) || !(xi < 1.0))
    throw InvalidInput("difference check needs 0 < xi < 1");
  if (taus.empty())
    throw InvalidInput("difference check needs sample times");
  DifferenceReport r;
  r.xi = xi;
  auto g = [xi](double x) { return -(-std::expm1(-x)) * std::pow(x, -xi); };
  // (1 - e^{-x}) x^{-xi} is unimodal with its maximum below x = 1 / (1 - xi).
  const auto best = boost::math::tools::brent_find_minima(g, 1e-12, 2.0 / (1.0 - xi), 52);
  r.envelope = -best.second;
  std::vector<double> ts, vs;
  for (double tau : taus) {
    if (!(tau > 0.0))
      throw InvalidInput("difference check needs tau > 0");
    double v = 0.0;
    for (double l : lambda)
      if (l > 0.0)
        v = std::max(v, -std::expm1(-tau * l) * std::pow(l, -xi));
    r.sup_scaled = std::max(r.sup_scaled, std::pow(tau, -xi) * v);
    ts.push_back(tau);
    vs.push_back(v);
  }
  if (ts.size() >= 2) {
    r.fit = fit_power_law(ts, vs);
  }
  return r;
}

} // namespace wentzell
