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

#include "wentzell/pair_quadrature.hpp"

#include "wentzell/error.hpp"

#include <algorithm>
#include <cmath>

namespace wentzell::pairq {

namespace {

double signed_area(const Tri &T) { return 0.5 * cross(T[1] - T[0], T[2] - T[0]); }

Vec2 at(const Tri &T, const std::array<double, 3> &b) {
  return b[0] * T[0] + b[1] * T[1] + b[2] * T[2];
}

void check_order(int n) {
  if (n < 2)
    throw InvalidInput("touching-pair quadrature order must be at least 2");
}

} // namespace

std::vector<PairPoint> identical(const Tri &T, double sigma, int n) {
  check_order(n);
  const double A = signed_area(T);
  const double beta = 3.0 - sigma;
  std::array<Vec2, 3> c;
  for (int k = 0; k < 3; ++k) {
    const Vec2 w = T[(k + 2) % 3] - T[(k + 1) % 3];
    c[k] = (1.0 / (2.0 * A)) * Vec2{-w.y, w.x};
  }
  std::vector<Vec2> hex;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b)
        hex.push_back(T[a] - T[b]);
  std::sort(hex.begin(), hex.end(),
            [](const Vec2 &p, const Vec2 &q) { return std::atan2(p.y, p.x) < std::atan2(q.y, q.x); });

  const auto gr = quad::gauss_jacobi01(n, beta);
  const auto gt = quad::gauss_legendre01(n);
  const auto tri = quad::collapsed_triangle(std::max(2, (n + 1) / 2));
  std::vector<PairPoint> pts;
  pts.reserve(6 * gr.size() * gt.size() * tri.size());
  const double area2 = 2.0 * std::abs(A);
  for (int j = 0; j < 6; ++j) {
    const Vec2 Q0 = hex[j], dQ = hex[(j + 1) % 6] - hex[j];
    const double det = std::abs(cross(Q0, dQ));
    for (std::size_t it = 0; it < gt.size(); ++it) {
      const Vec2 q = Q0 + gt.x[it] * dQ;
      const double qn = std::pow(norm(q), -sigma);
      for (std::size_t ir = 0; ir < gr.size(); ++ir) {
        const double r = gr.x[ir];
        const Vec2 z = r * q;
        std::array<double, 3> m;
        for (int k = 0; k < 3; ++k)
          m[k] = std::max(0.0, -dot(c[k], z));
        const double base = gr.w[ir] * gt.w[it] * det * std::pow(r, 1.0 - beta - sigma) * qn *
                            (1.0 - r) * (1.0 - r) * area2;
        for (std::size_t iq = 0; iq < tri.size(); ++iq) {
          const std::array<double, 3> mu{1.0 - tri.xi1[iq] - tri.xi2[iq], tri.xi1[iq],
                                         tri.xi2[iq]};
          PairPoint p;
          for (int k = 0; k < 3; ++k) {
            p.bx[k] = m[k] + (1.0 - r) * mu[k];
            p.by[k] = p.bx[k] + dot(c[k], z);
          }
          p.w = base * tri.w[iq];
          pts.push_back(p);
        }
      }
    }
  }
  return pts;
}

std::vector<PairPoint> common_edge(const Tri &T1, const Tri &T2, double sigma, int n) {
  check_order(n);
  const Vec2 e = T1[1] - T1[0], A = T1[2] - T1[0], B = T2[2] - T2[0];
  const double jac = std::abs(cross(e, A)) * std::abs(cross(e, B));
  const double beta = 4.0 - sigma;
  const auto gr = quad::gauss_jacobi01(n, beta);
  const auto g = quad::gauss_legendre01(n);
  std::vector<PairPoint> pts;
  pts.reserve(4 * gr.size() * g.size() * g.size() * g.size());
  for (int face = 0; face < 4; ++face) {
    for (std::size_t i1 = 0; i1 < g.size(); ++i1) {
      for (std::size_t i2 = 0; i2 < g.size(); ++i2) {
        const double s1 = g.x[i1], s2 = g.x[i2];
        double wu, wp, wq, J;
        switch (face) {
        case 0:
          wu = s1 - 1.0, wp = 1.0, wq = s1 * s2, J = s1;
          break;
        case 1:
          wu = s1 - 1.0, wp = s2, wq = s1, J = 1.0;
          break;
        case 2:
          wu = s1, wp = 1.0 - s1, wq = s2, J = 1.0;
          break;
        default:
          wu = s1, wp = (1.0 - s1) * s2, wq = 1.0, J = 1.0 - s1;
          break;
        }
        const Vec2 d = wu * e + wp * A - wq * B;
        const double dn = std::pow(norm(d), -sigma);
        const double wface = g.w[i1] * g.w[i2] * J * jac * dn;
        for (std::size_t ir = 0; ir < gr.size(); ++ir) {
          const double rho = gr.x[ir];
          const double wr = wface * gr.w[ir] * std::pow(rho, 2.0 - sigma - beta) * (1.0 - rho);
          for (std::size_t it = 0; it < g.size(); ++it) {
            const double p1 = rho * std::max(0.0, wu) + (1.0 - rho) * g.x[it];
            const double p2 = rho * wp, q2 = rho * wq, q1 = p1 - rho * wu;
            pts.push_back({{1.0 - p1 - p2, p1, p2}, {1.0 - q1 - q2, q1, q2}, wr * g.w[it]});
          }
        }
      }
    }
  }
  return pts;
}

std::vector<PairPoint> common_vertex(const Tri &T1, const Tri &T2, double sigma, int n) {
  check_order(n);
  const Vec2 A1 = T1[1] - T1[0], A2 = T1[2] - T1[0];
  const Vec2 B1 = T2[1] - T2[0], B2 = T2[2] - T2[0];
  const double jac = std::abs(cross(A1, A2)) * std::abs(cross(B1, B2));
  const double beta = 5.0 - sigma;
  const auto gr = quad::gauss_jacobi01(n, beta);
  const auto gw = quad::gauss_legendre01(n);
  const auto tri = quad::collapsed_triangle(n);
  std::vector<PairPoint> pts;
  pts.reserve(2 * gr.size() * gw.size() * tri.size());
  for (int region = 0; region < 2; ++region) {
    for (std::size_t iw = 0; iw < gw.size(); ++iw) {
      const double w = gw.x[iw];
      for (std::size_t iq = 0; iq < tri.size(); ++iq) {
        const double t1 = tri.xi1[iq], t2 = tri.xi2[iq];
        // edge point scaled by rho on one side, interior point on the other
        const Vec2 d = region == 0 ? ((1.0 - w) * A1 + w * A2) - (t1 * B1 + t2 * B2)
                                   : (t1 * A1 + t2 * A2) - ((1.0 - w) * B1 + w * B2);
        const double wd = gw.w[iw] * tri.w[iq] * jac * std::pow(norm(d), -sigma);
        for (std::size_t ir = 0; ir < gr.size(); ++ir) {
          const double rho = gr.x[ir];
          const double wt = wd * gr.w[ir] * std::pow(rho, 3.0 - sigma - beta);
          double p1, p2, q1, q2;
          if (region == 0) {
            p1 = rho * (1.0 - w), p2 = rho * w, q1 = rho * t1, q2 = rho * t2;
          } else {
            q1 = rho * (1.0 - w), q2 = rho * w, p1 = rho * t1, p2 = rho * t2;
          }
          pts.push_back({{1.0 - p1 - p2, p1, p2}, {1.0 - q1 - q2, q1, q2}, wt});
        }
      }
    }
  }
  return pts;
}

std::vector<PairPoint> tensor(const Tri &T1, const Tri &T2, double sigma,
                              const quad::TriangleRule &r1, const quad::TriangleRule &r2) {
  const double a1 = 2.0 * std::abs(signed_area(T1)), a2 = 2.0 * std::abs(signed_area(T2));
  std::vector<PairPoint> pts;
  pts.reserve(r1.size() * r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const std::array<double, 3> bx{1.0 - r1.xi1[i] - r1.xi2[i], r1.xi1[i], r1.xi2[i]};
    const Vec2 x = at(T1, bx);
    for (std::size_t j = 0; j < r2.size(); ++j) {
      const std::array<double, 3> by{1.0 - r2.xi1[j] - r2.xi2[j], r2.xi1[j], r2.xi2[j]};
      const double w = r1.w[i] * r2.w[j] * a1 * a2 * std::pow(norm(x - at(T2, by)), -sigma);
      pts.push_back({bx, by, w});
    }
  }
  return pts;
}

std::vector<SegPoint> segment_identical(Vec2 P, Vec2 Q, double sigma, int n) {
  check_order(n);
  const double L = norm(Q - P);
  const double beta = 2.0 - sigma;
  const auto gz = quad::gauss_jacobi01(n, beta);
  const auto gt = quad::gauss_legendre01(n);
  std::vector<SegPoint> pts;
  pts.reserve(2 * gz.size() * gt.size());
  for (std::size_t iz = 0; iz < gz.size(); ++iz) {
    const double z = gz.x[iz];
    const double wz = gz.w[iz] * (1.0 - z) * L * L * std::pow(L, -sigma) * std::pow(z, -sigma - beta);
    for (std::size_t it = 0; it < gt.size(); ++it) {
      const double lo = (1.0 - z) * gt.x[it];
      const double w = wz * gt.w[it];
      pts.push_back({lo, lo + z, w});
      pts.push_back({lo + z, lo, w});
    }
  }
  return pts;
}

std::vector<SegPoint> segment_adjacent(Vec2 V, Vec2 A, Vec2 B, double sigma, int n) {
  check_order(n);
  const Vec2 a = A - V, b = B - V;
  const double jac = norm(a) * norm(b);
  const double beta = 3.0 - sigma;
  const auto gr = quad::gauss_jacobi01(n, beta);
  const auto gw = quad::gauss_legendre01(n);
  std::vector<SegPoint> pts;
  pts.reserve(2 * gr.size() * gw.size());
  for (std::size_t iw = 0; iw < gw.size(); ++iw) {
    const double w = gw.x[iw];
    const double d0 = std::pow(norm(a - w * b), -sigma);
    const double d1 = std::pow(norm(w * a - b), -sigma);
    for (std::size_t ir = 0; ir < gr.size(); ++ir) {
      const double rho = gr.x[ir];
      const double base = gr.w[ir] * gw.w[iw] * jac * std::pow(rho, 1.0 - sigma - beta);
      pts.push_back({rho, rho * w, base * d0});
      pts.push_back({rho * w, rho, base * d1});
    }
  }
  return pts;
}

std::vector<SegPoint> segment_tensor(Vec2 P1, Vec2 Q1, Vec2 P2, Vec2 Q2, double sigma,
                                     const quad::Rule1D &r) {
  const double L1 = norm(Q1 - P1), L2 = norm(Q2 - P2);
  std::vector<SegPoint> pts;
  pts.reserve(r.size() * r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec2 x = P1 + r.x[i] * (Q1 - P1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      const Vec2 y = P2 + r.x[j] * (Q2 - P2);
      pts.push_back({r.x[i], r.x[j], r.w[i] * r.w[j] * L1 * L2 * std::pow(norm(x - y), -sigma)});
    }
  }
  return pts;
}

} // namespace wentzell::pairq
