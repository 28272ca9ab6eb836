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

#pragma once

#include "wentzell/assembly.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

namespace wentzell {

struct TimeGrid {
  std::vector<double> t;

  static TimeGrid uniform(double T, std::size_t steps);
  std::size_t steps() const { return t.empty() ? 0 : t.size() - 1; }
  double dt(std::size_t n) const { return t[n + 1] - t[n]; }
  /// Index of a grid node; throws InvalidInput for off-grid times.
  std::size_t index_of(double time) const;
};

/// Backward-Euler evolution family: one step solves
/// (M_m + dt E_h(t_{n+1})) u+ = M_m u.
class EvolutionFamily {
public:
  EvolutionFamily(const FormAssembler &fa, TimeGrid grid);

  Vector step(const Vector &u, std::size_t n) const;
  /// U_h(t_k1, t_k0) phi for k0 <= k1.
  Vector propagate(const Vector &phi, std::size_t k0, std::size_t k1) const;
  Vector propagate_times(const Vector &phi, double tau, double t) const;
  /// Explicit U_h(t_k1, t_k0).
  Matrix propagator(std::size_t k0, std::size_t k1) const;
  /// Applies one step to every column.
  Matrix step_matrix(const Matrix &U, std::size_t n) const;

  const TimeGrid &grid() const { return grid_; }
  const Vector &mass() const { return M_; }
  const FormAssembler &assembler() const { return fa_; }

private:
  using Factor = std::shared_ptr<const Eigen::LLT<Matrix>>;
  Factor factor(std::size_t n) const;

  const FormAssembler &fa_;
  TimeGrid grid_;
  Vector M_;
  std::size_t cache_limit_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, Factor> cache_;
  mutable std::vector<std::pair<double, double>> order_;
};

struct ContractionReport {
  double p = 2.0;
  double max_norm = 0.0;     // largest operator-norm estimate over the sampled times
  double worst_t = 0.0;
  double max_random = 0.0;   // largest ratio over random inputs
};

/// l^p(m) operator norm of U_h(t,0) at grid indices; p in {1, 2, inf}.
ContractionReport lp_contraction_check(const EvolutionFamily &fam, double p,
                                       const std::vector<std::size_t> &indices, int trials,
                                       std::uint64_t seed);

struct PositivityReport {
  double worst_random = 0.0;   // min over trials of min(U phi) / ||phi||_inf
  double worst_explicit = 0.0; // min_i sum_j min(0, U_ij), the worst phi in [0, 1]^n
  double min_entry = 0.0;
};

PositivityReport positivity_check(const EvolutionFamily &fam,
                                  const std::vector<std::size_t> &indices, int trials,
                                  std::uint64_t seed);

/// Generalized eigenpairs of (E, diag(M)) with M-orthonormal eigenvectors.
struct Spectrum {
  Vector lambda;
  Matrix V;
};

Spectrum spectrum(const Matrix &E, const Vector &M);

struct PowerFit {
  std::vector<double> t;
  std::vector<double> value;
  double exponent = 0.0;  // value ~ prefactor * t^{-exponent}
  double prefactor = 0.0;
  double residual = 0.0;  // rms of log residuals
};

PowerFit fit_power_law(const std::vector<double> &t, const std::vector<double> &v);

/// Log-spaced grid indices inside [t_lo, t_hi]; rejects windows under half a decade.
std::vector<std::size_t> window_indices(const TimeGrid &grid, double t_lo, double t_hi,
                                        std::size_t samples);

/// Fit of ||U_h(t,0)||_{l^1(m) -> l^inf} over the window.
PowerFit ultracontractivity_fit(const EvolutionFamily &fam, double t_lo, double t_hi,
                                std::size_t samples);

/// Fit of ||U_h(t,0)||_{l^2(m) -> l^{2p}(m)} over the window.
PowerFit interpolated_smoothing_fit(const EvolutionFamily &fam, double p, double t_lo,
                                    double t_hi, std::size_t samples);

struct FractionalPowerReport {
  double theta = 0.0;
  double sup_scaled = 0.0; // sup over taus of tau^theta max_k lambda_k^theta e^{-tau lambda_k}
  double envelope = 0.0;   // sup_x x^theta e^{-x}
  PowerFit fit;
  std::vector<std::string> warnings;
};

FractionalPowerReport fractional_power_check(const Vector &lambda, double theta,
                                             const std::vector<double> &taus, double eta);

struct DifferenceReport {
  double xi = 0.0;
  double sup_scaled = 0.0; // sup over taus of tau^{-xi} max_k (1 - e^{-tau lambda_k}) lambda_k^{-xi}
  double envelope = 0.0;   // sup_x (1 - e^{-x}) x^{-xi}
  PowerFit fit;
};

DifferenceReport fractional_difference_check(const Vector &lambda, double xi,
                                             const std::vector<double> &taus);

} // namespace wentzell
