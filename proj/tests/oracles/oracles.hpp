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

// Reference computations used only by the tests. Nothing here calls the
// library's quadrature code.

#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline double cns(int N, double s) {
  const mp S(s);
  const mp pi = boost::math::constants::pi<mp>();
  mp v = S * pow(mp(2), 2 * S) * boost::math::tgamma((N + 2 * S) / 2) /
         (pow(pi, mp(N) / 2) * boost::math::tgamma(1 - S));
  return static_cast<double>(v);
}

/// C_s via the closed form of its defining integral (valid for 1/2 < s < 1):
/// I = B(2s-1, 2-2s) - 1/(2s-1) - psi(2-2s) - gamma.
inline double cs(double s) {
  const mp S(s);
  const mp I = boost::math::beta(2 * S - 1, 2 - 2 * S) - 1 / (2 * S - 1) -
               boost::math::digamma(2 - 2 * S) - boost::math::constants::euler<mp>();
  return static_cast<double>(mp(cns(1, s)) / (2 * S * (2 * S - 1)) * I);
}

/// Continuous P1 interpolant on the crisscross triangulation of [lo, hi]^2
/// with `cells` cells per side (diagonal (0,0)-(1,1) in cells with even i+j).
struct P1Field {
  double lo, hi;
  int cells;
  std::vector<double> u; // (cells+1)^2 nodal values, x fastest

  double operator()(double x, double y) const {
    const double h = (hi - lo) / cells;
    const double fx = (x - lo) / h, fy = (y - lo) / h;
    int i = std::min(cells - 1, std::max(0, static_cast<int>(std::floor(fx))));
    int j = std::min(cells - 1, std::max(0, static_cast<int>(std::floor(fy))));
    const double a = fx - i, b = fy - j;
    auto U = [&](int di, int dj) { return u[(j + dj) * (cells + 1) + (i + di)]; };
    if ((i + j) % 2 == 0) {
      if (a >= b)
        return U(0, 0) + a * (U(1, 0) - U(0, 0)) + b * (U(1, 1) - U(1, 0));
      return U(0, 0) + b * (U(0, 1) - U(0, 0)) + a * (U(1, 1) - U(0, 1));
    }
    if (a + b <= 1.0)
      return U(0, 0) + a * (U(1, 0) - U(0, 0)) + b * (U(0, 1) - U(0, 0));
    return U(1, 1) + (1.0 - a) * (U(0, 1) - U(1, 1)) + (1.0 - b) * (U(1, 0) - U(1, 1));
  }
};

/// Distance from x to the boundary of [lo,hi]^2 along direction (c, s).
inline double ray_length(double lo, double hi, double x, double y, double c, double s) {
  double R = 1e300;
  if (c > 1e-15)
    R = std::min(R, (hi - x) / c);
  if (c < -1e-15)
    R = std::min(R, (lo - x) / c);
  if (s > 1e-15)
    R = std::min(R, (hi - y) / s);
  if (s < -1e-15)
    R = std::min(R, (lo - y) / s);
  return R;
}

namespace detail {

inline void unit_gauss(std::vector<double> &gx, std::vector<double> &gw) {
  using boost::math::quadrature::gauss;
  const auto &xn = gauss<double, 8>::abscissa();
  const auto &xw = gauss<double, 8>::weights();
  for (std::size_t i = 0; i < xn.size(); ++i) {
    gx.push_back(0.5 * (1 + xn[i]));
    gw.push_back(0.5 * xw[i]);
    gx.push_back(0.5 * (1 - xn[i]));
    gw.push_back(0.5 * xw[i]);
  }
}

} // namespace detail

/// Integral over Q x Q (Q = [lo,hi]^2) of k(x,y) (f(x)-f(y))(g(x)-g(y)) |x-y|^{-sigma}
/// for f, g piecewise linear on the crisscross triangulation with `cells` cells per side.
/// The outer variable runs over each triangle split into three pieces towards the
/// centroid, graded quadratically towards the triangle edges where the inner
/// integral is singular; the inner variable uses polar coordinates around x with
/// rho = R v^2.
inline double gagliardo(double lo, double hi, int cells, double sigma,
                        const std::function<double(double, double)> &f,
                        const std::function<double(double, double)> &g,
                        const std::function<double(double, double, double, double)> &k = {},
                        int theta_panels = 64, int rho_panels = 16) {
  std::vector<double> gx, gw;
  detail::unit_gauss(gx, gw);
  const double h = (hi - lo) / cells;
  std::vector<std::array<std::array<double, 2>, 3>> tris;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const std::array<double, 2> a{lo + i * h, lo + j * h}, b{lo + (i + 1) * h, lo + j * h},
          c{lo + (i + 1) * h, lo + (j + 1) * h}, d{lo + i * h, lo + (j + 1) * h};
      if ((i + j) % 2 == 0) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  double total = 0.0;
  for (const auto &T : tris) {
    const double cx = (T[0][0] + T[1][0] + T[2][0]) / 3, cy = (T[0][1] + T[1][1] + T[2][1]) / 3;
    for (int e = 0; e < 3; ++e) {
      const auto &P = T[e], &Q = T[(e + 1) % 3];
      const double area2 =
          std::abs((Q[0] - P[0]) * (cy - P[1]) - (Q[1] - P[1]) * (cx - P[0]));
      for (std::size_t it = 0; it < gx.size(); ++it)
        for (std::size_t iv = 0; iv < gx.size(); ++iv) {
          const double tau = gx[it], v = gx[iv], u = v * v;
          const double bx = P[0] + tau * (Q[0] - P[0]), by = P[1] + tau * (Q[1] - P[1]);
          const double x = (1 - u) * bx + u * cx, y = (1 - u) * by + u * cy;
          const double wx = gw[it] * gw[iv] * 2 * v * (1 - u) * area2;
          const double fx = f(x, y), gxv = g(x, y);
          double inner = 0.0;
          for (int tp = 0; tp < theta_panels; ++tp)
            for (std::size_t t = 0; t < gx.size(); ++t) {
              const double th = 2 * M_PI * (tp + gx[t]) / theta_panels;
              const double wt = 2 * M_PI * gw[t] / theta_panels;
              const double c = std::cos(th), s = std::sin(th);
              const double R = ray_length(lo, hi, x, y, c, s);
              double ray = 0.0;
              for (int rp = 0; rp < rho_panels; ++rp)
                for (std::size_t r = 0; r < gx.size(); ++r) {
                  const double vv = (rp + gx[r]) / rho_panels;
                  const double rho = R * vv * vv;
                  const double jac = 2.0 * R * vv * gw[r] / rho_panels;
                  const double X = x + rho * c, Y = y + rho * s;
                  double val = (fx - f(X, Y)) * (gxv - g(X, Y)) * std::pow(rho, 1.0 - sigma);
                  if (k)
                    val *= k(x, y, X, Y);
                  ray += jac * val;
                }
              inner += wt * ray;
            }
          total += wx * inner;
        }
    }
  }
  return total;
}

/// Closed polyline or open chain of points; integral over the chain squared of
/// (f(x)-f(y))(g(x)-g(y)) |x-y|^{-sigma} with f, g given by nodal values
/// (piecewise linear in arc length).
struct Chain {
  std::vector<std::array<double, 2>> pts;
  bool closed = true;
};

inline double chain_gagliardo(const Chain &ch, const std::vector<double> &fu,
                              const std::vector<double> &gu, double sigma) {
  const std::size_t np = ch.pts.size();
  const std::size_t ns = ch.closed ? np : np - 1;
  auto delta = [&](std::size_t seg, std::size_t c) {
    return ch.pts[(seg + 1) % np][c] - ch.pts[seg][c];
  };
  auto jump = [&](const std::vector<double> &u, std::size_t seg) { return u[(seg + 1) % np] - u[seg]; };
  // Differences x(s1, a) - x(s2, b) written relative to a shared vertex when there
  // is one, so they keep full relative precision as both points approach it.
  auto diff = [&](std::size_t s1, double a, std::size_t s2, double b, auto &&part) {
    if (s1 == s2)
      return (a - b) * part(s1);
    if ((s1 + 1) % np == s2 && (ch.closed || s1 + 1 < np))
      return -(1.0 - a) * part(s1) - b * part(s2);
    if ((s2 + 1) % np == s1 && (ch.closed || s2 + 1 < np))
      return a * part(s1) + (1.0 - b) * part(s2);
    return 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (std::size_t s1 = 0; s1 < ns; ++s1)
    for (std::size_t s2 = 0; s2 < ns; ++s2) {
      const double L1 = std::hypot(delta(s1, 0), delta(s1, 1));
      const double L2 = std::hypot(delta(s2, 0), delta(s2, 1));
      const bool touching = s1 == s2 || (s1 + 1) % np == s2 || (s2 + 1) % np == s1;
      auto inner = [&](double a) {
        auto h = [&](double b) {
          double dx, dy, df, dg;
          if (touching) {
            dx = diff(s1, a, s2, b, [&](std::size_t k) { return delta(k, 0); });
            dy = diff(s1, a, s2, b, [&](std::size_t k) { return delta(k, 1); });
            df = diff(s1, a, s2, b, [&](std::size_t k) { return jump(fu, k); });
            dg = diff(s1, a, s2, b, [&](std::size_t k) { return jump(gu, k); });
          } else {
            dx = ch.pts[s1][0] + a * delta(s1, 0) - ch.pts[s2][0] - b * delta(s2, 0);
            dy = ch.pts[s1][1] + a * delta(s1, 1) - ch.pts[s2][1] - b * delta(s2, 1);
            df = fu[s1] + a * jump(fu, s1) - fu[s2] - b * jump(fu, s2);
            dg = gu[s1] + a * jump(gu, s1) - gu[s2] - b * jump(gu, s2);
          }
          const double d = std::hypot(dx, dy);
          const double num = df * dg;
          if (num == 0.0 || d == 0.0)
            return 0.0;
          return num * std::pow(d, -sigma);
        };
        // split at the diagonal; slivers below 1e-12 contribute O(w^{3/2})
        if (s1 == s2)
          return (a > 1e-12 ? ts.integrate(h, 0.0, a, 1e-10) : 0.0) +
                 (a < 1.0 - 1e-12 ? ts.integrate(h, a, 1.0, 1e-10) : 0.0);
        return ts.integrate(h, 0.0, 1.0, 1e-10);
      };
      total += L1 * L2 * ts.integrate(inner, 0.0, 1.0, 1e-8);
    }
  return total;
}

// P.V. of int (f(x) - f(y)) |x-y|^{-sigma} dy over [lo, hi]^2 for a field that is
// linear on the disk of radius r around x: the disk contributes nothing, and the
// rest is integrated in polar coordinates with adaptive Gauss-Kronrod in both variables.
inline double pv_point(double lo, double hi, const std::function<double(double, double)> &f,
                       double sigma, double x, double y, double r) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  const double fx = f(x, y);
  auto outer = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double R = ray_length(lo, hi, x, y, c, s);
    if (R <= r)
      return 0.0;
    auto inner = [&](double rho) { return std::pow(rho, 1.0 - sigma) * (fx - f(x + rho * c, y + rho * s)); };
    // split at powers of two so the rho^{1-sigma} decay is resolved
    double sum = 0.0;
    for (double a = r; a < R; a *= 2.0)
      sum += GK::integrate(inner, a, std::min(R, 2.0 * a), 8, 1e-8);
    return sum;
  };
  double total = 0.0;
  const int pieces = 16;
  for (int k = 0; k < pieces; ++k)
    total += GK::integrate(outer, 2.0 * M_PI * k / pieces, 2.0 * M_PI * (k + 1) / pieces, 8, 1e-7);
  return total;
}

} // namespace oracle
