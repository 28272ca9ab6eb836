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

#include "wentzell/evolution.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wentzell {

struct Nonlinearity {
  std::string name;
  std::function<double(double)> f;         // pointwise u -> J(u)
  double p = 1.0;
  std::function<double(double)> lipschitz; // l(r)
  bool zero_at_zero = true;

  Vector operator()(const Vector &u) const;
};

/// J(u) = |u|^{p-1} u with l(r) = p r^{p-1}.
Nonlinearity power_nonlinearity(double p);
Nonlinearity zero_nonlinearity(double p);

/// Largest sampled ||J(u) - J(v)||_{l2(m)} / (l(r) ||u - v||_{l^{2p}(m)}) over
/// pairs with ||u||_inf, ||v||_inf <= r.
double lipschitz_sample_ratio(const Nonlinearity &J, const Vector &m, double r, int pairs,
                              std::uint64_t seed);

GrowthReport growth_condition_check(const Nonlinearity &J, const ExponentPack &pack);

/// Nodal fields on grid times t_0 < ... < t_n with the norms of the space Y.
struct MildIterate {
  std::vector<double> t;
  std::vector<Vector> u;
  double weighted_norm = 0.0; // sup_{t > t_0} (t - t_0)^{b_w} ||u(t)||_{l^{2p}(m)}
  double plain_norm = 0.0;    // sup_t ||u(t)||_{l2(m)}
};

MildIterate make_iterate(std::vector<double> t, std::vector<Vector> u, const Vector &m,
                         double p, double b_w);

/// max(sup_t ||a - b||_{l2(m)}, sup_t (t - t_0)^{b_w} ||a - b||_{l^{2p}(m)}).
double y_distance(const MildIterate &a, const MildIterate &b, const Vector &m, double p,
                  double b_w);

struct WindowReport {
  double kappa = 0.0;
  double measured = 0.0; // max over (0, 10 t_1] of t^{b_w} ||U_h(t,0) phi||_{l^{2p}(m)}
  bool pass = false;
  double T_bar = 0.0;
  double phi_q_norm = 0.0;
};

WindowReport initial_window_check(const Vector &phi, const EvolutionFamily &fam,
                                  const ExponentPack &pack, double kappa, double T_bar = 0.0);

enum class PicardStatus { converged, non_contraction, leaves_Y, window_failed, blow_up };
std::string to_string(PicardStatus s);

struct PicardOptions {
  double kappa = 0.1;
  double T_bar = 0.0; // 0 selects the grid horizon
  double tol = 1e-10;
  int max_iter = 200;
  bool allow_window_failure = false;
  bool linear_seed = true; // start from U_h(t,0) phi instead of zero
};

struct PicardResult {
  PicardStatus status = PicardStatus::converged;
  MildIterate solution;
  std::vector<double> distances;
  double contraction_ratio = 0.0;
  double residual = 0.0; // ||u - F(u)||_Y at the returned iterate
  int iterations = 0;
  WindowReport window;
  std::string message;
};

/// Fixed point of F(w)(t_n) = U_h(t_n,t_0) phi + sum_{k<n} dt_k U_h(t_n,t_{k+1}) J(w(t_{k+1})).
PicardResult picard_solve(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                          const ExponentPack &pack, const PicardOptions &opt = {});

/// F applied once on grid indices [k0, k1]; w.t must match those nodes.
MildIterate picard_map(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                       const MildIterate &w, std::size_t k0, const ExponentPack &pack);

struct ContinuationResult {
  MildIterate solution;
  PicardStatus status = PicardStatus::converged;
  double t_reached = 0.0;
  int segments = 0;
  std::string message;
};

/// Restarts Picard from u(T_bar) on consecutive windows of `segment_steps` steps
/// until the horizon or the first failure.
ContinuationResult picard_continuation(const Vector &phi, const EvolutionFamily &fam,
                                       const Nonlinearity &J, const ExponentPack &pack,
                                       const PicardOptions &opt, std::size_t segment_steps,
                                       double blowup_cap = 1e6);

struct ImexResult {
  MildIterate solution;
  bool blew_up = false;
  double T_phi = 0.0; // time at which the guard fired
};

/// (M_m + dt E_h(t_{n+1})) u^{n+1} = M_m (u^n + dt J(u^n)).
ImexResult imex_reference(const Vector &phi, const EvolutionFamily &fam, const Nonlinearity &J,
                          const ExponentPack &pack, double blowup_cap = 1e6);

struct GlobalReport {
  double q = 0.0;
  double phi_q_norm = 0.0;
  double M = 0.0;       // sup_t t^{b_w} ||U_h(t,0) phi||_{2p} / ||phi||_q
  double epsilon = 0.0; // M ||phi||_q
  double f_max = 0.0;   // sup_t t^{b_w} ||u(t)||_{2p} along the solution
  bool below_two_epsilon = false;
  double B = 0.0;
  double B_beta = 0.0;  // Beta(1 - a, a - b_w)
  double Lambda = 0.0;  // sup_{r >= 1} l(r) / r^{(1-a)/b_w}
  double epsilon_star = 0.0;
  double margin = 0.0;  // epsilon_star / epsilon
};

/// B = int_0^1 (1 - tau)^{-a} tau^{a - 1 - b_w} dtau by Gauss-Jacobi quadrature.
double smalldata_B(double a, double b_w);

GlobalReport global_smalldata_check(const Vector &phi, const EvolutionFamily &fam,
                                    const Nonlinearity &J, const ExponentPack &pack,
                                    const MildIterate &solution);

/// Fit of max_t ||u(t + sigma) - u(t)||_{l^{2p}(m)} ~ C sigma^gamma over t >= eps.
PowerFit hoelder_regularity_fit(const MildIterate &u, const Vector &m, double p, double eps);

} // namespace wentzell
