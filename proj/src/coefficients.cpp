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

#include "wentzell/coefficients.hpp"

#include "wentzell/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wentzell {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Vec2 perimeter_point(double u) {
  u = std::fmod(u, 4.0);
  if (u < 1.0)
    return {u, 0.0};
  if (u < 2.0)
    return {1.0, u - 1.0};
  if (u < 3.0)
    return {3.0 - u, 1.0};
  return {0.0, 4.0 - u};
}

} // namespace

double compute_CNs(int N, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("C_{N,s} requires 0 < s < 1 (got s = " + fmt(s) + ")");
  if (N < 1)
    throw InvalidInput("C_{N,s} requires N >= 1");
  const double lg = std::lgamma(0.5 * (N + 2.0 * s)) - std::lgamma(1.0 - s) -
                    0.5 * N * std::log(M_PI) + 2.0 * s * std::log(2.0);
  return s * std::exp(lg);
}

double compute_Cs(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("C_s requires 0 < s < 1 (got s = " + fmt(s) + ")");
  if (s == 0.5)
    throw NumericalFailure("singular-normalization", "C_s undefined at s = 1/2 (2s - 1 = 0)");
  const double e = 1.0 - 2.0 * s;
  boost::math::quadrature::tanh_sinh<double> ts;
  // log(1-z) is taken from the complement argument near z = 1.
  auto log1m = [](double z, double zc) { return z > 0.5 ? std::log(zc) : std::log1p(-z); };
  auto near = [&](double z, double zc) {
    return std::expm1(e * log1m(z, zc)) / z * std::pow(z, -e);
  };
  // The [1, inf) half after z = 1/w.
  auto far = [&](double w, double wc) { return std::expm1(e * log1m(w, wc)) / w; };
  const double tol = 1e-14;
  const double I = ts.integrate(near, 0.0, 1.0, tol) + ts.integrate(far, 0.0, 1.0, tol);
  return compute_CNs(1, s) / (2.0 * s * (2.0 * s - 1.0)) * I;
}

double default_growth_exponent(double p, double lambda) {
  if (!(p > 1.0 + 4.0 / lambda))
    throw HypothesisViolation({"p > 1 + 4/lambda violated (p = " + fmt(p) +
                               ", 1 + 4/lambda = " + fmt(1.0 + 4.0 / lambda) + ")"});
  return 1.0 / (p - 1.0) - lambda / (4.0 * p);
}

ExponentPack exponents(const ExponentInputs &in) {
  std::vector<std::string> v;
  const int N = in.N;
  const double d = in.d, s = in.s;
  if (!(s > 0.0 && s < 1.0))
    v.push_back("0 < s < 1 violated (s = " + fmt(s) + ")");
  if (!(N - d < 2.0 * s))
    v.push_back("N - d < 2s violated (" + fmt(N - d) + " < " + fmt(2.0 * s) + " is false)");
  if (!(2.0 * s < N))
    v.push_back("2s < N violated (" + fmt(2.0 * s) + " < " + std::to_string(N) + " is false)");
  if (!(in.p > 1.0))
    v.push_back("p > 1 violated (p = " + fmt(in.p) + ")");
  if (!(in.eta > 0.5 && in.eta < 1.0))
    v.push_back("1/2 < eta < 1 violated (eta = " + fmt(in.eta) + ")");
  if (!(in.kappa > 0.0))
    v.push_back("kappa > 0 violated");
  if (!(in.T > 0.0))
    v.push_back("T > 0 violated");
  if (!v.empty())
    throw HypothesisViolation(v);

  ExponentPack pk;
  pk.N = N;
  pk.d = d;
  pk.s = s;
  pk.p = in.p;
  pk.kappa = in.kappa;
  pk.T = in.T;
  pk.eta = in.eta;
  pk.alpha = s - 0.5 * (N - d);
  pk.lambda = 2.0 * d / (d - N + 2.0 * s);
  pk.a = 0.25 * pk.lambda * (1.0 - 1.0 / in.p);
  pk.b_w = in.b_w ? *in.b_w : default_growth_exponent(in.p, pk.lambda);
  if (!(pk.alpha > 0.0 && pk.alpha < 1.0))
    v.push_back("0 < alpha < 1 violated (alpha = " + fmt(pk.alpha) + ")");
  if (!(pk.b_w > 0.0 && pk.b_w < pk.a))
    v.push_back("0 < b_w < a violated (b_w = " + fmt(pk.b_w) + ", a = " + fmt(pk.a) + ")");
  if (!v.empty())
    throw HypothesisViolation(v);
  if (!(pk.a < 1.0))
    pk.warnings.push_back("0 < a < 1 for N - 2s <= d/2 violated (a = " + fmt(pk.a) + ")");
  pk.q = 2.0 * pk.lambda * in.p / (pk.lambda + 4.0 * in.p * pk.b_w);
  pk.CNs = compute_CNs(N, s);
  return pk;
}

double PairCoefficient::operator()(double t, const Vec2 &x, const Vec2 &y) const {
  if (full)
    return full(t, x, y);
  return factor(t) * (spatial ? spatial(x, y) : 1.0);
}

PairCoefficient constant_pair(double value) {
  PairCoefficient c;
  c.name = "constant";
  if (value != 1.0)
    c.time_factor = [value](double) { return value; };
  c.lower = 0.5 * value;
  c.upper = 1.5 * value;
  return c;
}

PairCoefficient sinusoidal_pair(double amplitude, double T, double eta) {
  PairCoefficient c;
  c.name = "sinusoidal";
  c.time_factor = [amplitude](double t) { return 1.0 + amplitude * std::sin(t); };
  c.time_constant = amplitude == 0.0;
  c.lower = 1.0 - 1.5 * std::abs(amplitude);
  c.upper = 1.0 + 1.5 * std::abs(amplitude);
  c.hoelder_constant = std::abs(amplitude) * std::pow(T, 1.0 - eta);
  return c;
}

PairCoefficient expression_pair(const std::string &expr, double lower, double upper,
                                double hoelder_constant) {
  Expression e(expr);
  PairCoefficient c;
  c.name = "custom";
  c.time_constant = !e.depends_on_time();
  if (c.time_constant)
    c.spatial = [e](const Vec2 &x, const Vec2 &y) { return e({0.0, x.x, x.y, y.x, y.y}); };
  else
    c.full = [e](double t, const Vec2 &x, const Vec2 &y) { return e({t, x.x, x.y, y.x, y.y}); };
  c.lower = lower;
  c.upper = upper;
  c.hoelder_constant = hoelder_constant;
  return c;
}

PointCoefficient constant_point(double value) {
  PointCoefficient c;
  c.name = "constant";
  c.eval = [value](double, const Vec2 &) { return value; };
  c.lower = 0.5 * value;
  c.upper = 1.5 * value;
  return c;
}

PointCoefficient sinusoidal_point(double base, double amplitude, double T, double eta) {
  PointCoefficient c;
  c.name = "sinusoidal";
  c.eval = [base, amplitude](double t, const Vec2 &) { return base + amplitude * std::sin(t); };
  c.time_constant = amplitude == 0.0;
  c.lower = base - 1.5 * std::abs(amplitude);
  c.upper = base + 1.5 * std::abs(amplitude);
  c.hoelder_constant = std::abs(amplitude) * std::pow(T, 1.0 - eta);
  return c;
}

PointCoefficient expression_point(const std::string &expr, double lower, double upper,
                                  double hoelder_constant) {
  Expression e(expr);
  PointCoefficient c;
  c.name = "custom";
  c.time_constant = !e.depends_on_time();
  c.eval = [e](double t, const Vec2 &p) { return e({t, p.x, p.y, 0.0, 0.0}); };
  c.lower = lower;
  c.upper = upper;
  c.hoelder_constant = hoelder_constant;
  return c;
}

CoefficientSet default_coefficients(const ExponentInputs &in) {
  CoefficientSet c;
  c.pack = exponents(in);
  c.K = constant_pair(1.0);
  c.zeta = constant_pair(1.0);
  c.b = constant_point(1.0);
  c.Cs = compute_Cs(in.s);
  return c;
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto &c : checks)
    if (!c.pass)
      out.push_back(c.name + " (worst sampled value " + fmt(c.worst) + ")");
  return out;
}

double sampled_hoelder(const std::function<double(double)> &f, double T, double eta, int samples,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, T);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = U(rng), tau = U(rng);
    if (t == tau)
      continue;
    worst = std::max(worst, std::abs(f(t) - f(tau)) / std::pow(std::abs(t - tau), eta));
  }
  // include short separations, where the Hoelder quotient is largest for eta < 1
  for (int k = 0; k < samples / 4; ++k) {
    const double t = U(rng);
    const double dt = T * std::pow(10.0, -1.0 - 5.0 * k / std::max(1, samples / 4));
    const double tau = t + dt <= T ? t + dt : t - dt;
    worst = std::max(worst, std::abs(f(t) - f(tau)) / std::pow(dt, eta));
  }
  return worst;
}

ValidationReport validate_hypotheses(const CoefficientSet &c, int samples, std::uint64_t seed) {
  ValidationReport rep;
  const double T = c.pack.T, eta = c.pack.eta;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto interior = [&] { return Vec2{U(rng), U(rng)}; };
  auto boundary = [&] { return perimeter_point(4.0 * U(rng)); };
  const double slack = 1e-12;

  auto pair_checks = [&](const PairCoefficient &k, const std::string &sym, bool on_boundary) {
    double asym = 0.0, kmin = std::numeric_limits<double>::infinity(), kmax = 0.0, hol = 0.0;
    for (int i = 0; i < samples; ++i) {
      const Vec2 x = on_boundary ? boundary() : interior();
      const Vec2 y = on_boundary ? boundary() : interior();
      const double t = T * U(rng);
      const double kxy = k(t, x, y), kyx = k(t, y, x);
      asym = std::max(asym, std::abs(kxy - kyx) / std::max(1.0, std::abs(kxy)));
      kmin = std::min(kmin, kxy);
      kmax = std::max(kmax, kxy);
      hol = std::max(hol, sampled_hoelder([&](double tt) { return k(tt, x, y); }, T, eta, 8,
                                          seed + 7919u * static_cast<unsigned>(i)));
    }
    rep.checks.push_back({sym + " symmetric", asym <= slack, asym});
    rep.checks.push_back({"0 < " + sym + "1 < " + sym + "2", k.lower > 0.0 && k.lower < k.upper,
                          k.lower});
    rep.checks.push_back({sym + "1 <= " + sym + " <= " + sym + "2",
                          kmin >= k.lower - slack && kmax <= k.upper + slack,
                          kmin < k.lower ? kmin : kmax});
    rep.checks.push_back({sym + " Hoelder in t with exponent eta",
                          hol <= k.hoelder_constant * (1.0 + 1e-9) + slack, hol});
  };
  pair_checks(c.K, "k", false);
  pair_checks(c.zeta, "zeta", true);

  double bmin = std::numeric_limits<double>::infinity(), bhol = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 P = boundary();
    bmin = std::min(bmin, c.b(T * U(rng), P));
    bhol = std::max(bhol, sampled_hoelder([&](double tt) { return c.b(tt, P); }, T, eta, 8,
                                          seed + 104729u * static_cast<unsigned>(i)));
  }
  rep.checks.push_back({"b_0 > 0", c.b.lower > 0.0, c.b.lower});
  rep.checks.push_back({"inf b > b_0", bmin > c.b.lower, bmin});
  rep.checks.push_back({"b Hoelder in t with exponent eta",
                        bhol <= c.b.hoelder_constant * (1.0 + 1e-9) + slack, bhol});
  return rep;
}

GrowthReport growth_condition_check(const std::function<double(double)> &l, double a, double b_w,
                                    double r_min, double r_max, int points) {
  GrowthReport g;
  g.exponent = (1.0 - a) / b_w;
  for (int k = 0; k < points; ++k) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(k) / (points - 1));
    g.r.push_back(r);
    g.ratio.push_back(l(r) / std::pow(r, g.exponent));
  }
  // least-squares log-slope over the upper half of the sweep
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = points / 2; k < points; ++k) {
    const double x = std::log(g.r[k]), y = std::log(g.ratio[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  g.bounded = slope <= 1e-8;
  return g;
}

} // namespace wentzell
