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

#include "wentzell/expression.hpp"
#include "wentzell/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wentzell {

double compute_CNs(int N, double s);

/// Conormal normalization; throws NumericalFailure for s = 1/2.
double compute_Cs(double s);

/// Growth exponent for J(u) = |u|^{p-1} u; requires p > 1 + 4/lambda.
double default_growth_exponent(double p, double lambda);

struct ExponentInputs {
  int N = 2;
  double d = 1.0;
  double s = 0.75;
  double p = 3.0;
  std::optional<double> b_w; // defaults to default_growth_exponent(p, lambda)
  double kappa = 0.1;
  double T = 1.0;
  double eta = 0.75;
};

struct ExponentPack {
  int N = 2;
  double d = 1.0;
  double s = 0.75;
  double alpha = 0.0;
  double lambda = 0.0;
  double p = 3.0;
  double a = 0.0;
  double b_w = 0.0;
  double q = 0.0;
  double kappa = 0.1;
  double T = 1.0;
  double eta = 0.75;
  double CNs = 0.0;
  std::vector<std::string> warnings;
};

/// Throws HypothesisViolation listing every failed inequality.
ExponentPack exponents(const ExponentInputs &in);

/// Kernel on pairs of points: K(t,x,y) or zeta(t,x,y). When `full` is empty
/// the kernel is separable, time_factor(t) * spatial(x,y), with an empty
/// `spatial` meaning the constant 1.
struct PairCoefficient {
  std::string name;
  std::function<double(double)> time_factor;
  std::function<double(const Vec2 &, const Vec2 &)> spatial;
  std::function<double(double, const Vec2 &, const Vec2 &)> full;
  bool time_constant = true;
  double lower = 0.0;
  double upper = 0.0;
  double hoelder_constant = 0.0;

  double operator()(double t, const Vec2 &x, const Vec2 &y) const;
  bool separable() const { return !full; }
  bool unit_spatial() const { return !full && !spatial; }
  double factor(double t) const { return time_factor ? time_factor(t) : 1.0; }
};

/// Boundary potential b(t,P).
struct PointCoefficient {
  std::string name;
  std::function<double(double, const Vec2 &)> eval;
  bool time_constant = true;
  double lower = 0.0; // b0
  double upper = 0.0;
  double hoelder_constant = 0.0;

  double operator()(double t, const Vec2 &p) const { return eval(t, p); }
};

PairCoefficient constant_pair(double value);
PairCoefficient sinusoidal_pair(double amplitude, double T, double eta);
PairCoefficient expression_pair(const std::string &expr, double lower, double upper,
                                double hoelder_constant);
PointCoefficient constant_point(double value);
PointCoefficient sinusoidal_point(double base, double amplitude, double T, double eta);
PointCoefficient expression_point(const std::string &expr, double lower, double upper,
                                  double hoelder_constant);

struct CoefficientSet {
  PairCoefficient K;
  PairCoefficient zeta;
  PointCoefficient b;
  ExponentPack pack;
  double Cs = 0.0; // NaN when s = 1/2

  bool time_constant() const { return K.time_constant && zeta.time_constant && b.time_constant; }
};

CoefficientSet default_coefficients(const ExponentInputs &in = {});

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0; // worst sampled value of the checked quantity
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool pass() const;
  std::vector<std::string> failures() const;
};

/// Sampled check of symmetry, bounds and t-Hoelder continuity on the unit
/// square (K) and its boundary (zeta, b).
ValidationReport validate_hypotheses(const CoefficientSet &c, int samples, std::uint64_t seed);

/// max over sampled tau < t of |f(t) - f(tau)| / |t - tau|^eta.
double sampled_hoelder(const std::function<double(double)> &f, double T, double eta, int samples,
                       std::uint64_t seed);

/// l(r) / r^{(1-a)/b_w} over a log-spaced sweep of r.
struct GrowthReport {
  std::vector<double> r;
  std::vector<double> ratio;
  double exponent = 0.0;
  bool bounded = false;
};

GrowthReport growth_condition_check(const std::function<double(double)> &l, double a, double b_w,
                                    double r_min = 1.0, double r_max = 1e6, int points = 61);

} // namespace wentzell
