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

#include "wentzell/assembly.hpp"

#include "wentzell/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace wentzell {

namespace {

// Eigenvalues of L^{-1} D L^{-T} with H = L L^T.
Vector pencil_eigenvalues(const Matrix &D, const Eigen::LLT<Matrix> &llt) {
  Matrix C = llt.matrixL().solve(D);
  C = llt.matrixL().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(C, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::LLT<Matrix> factor_gram(const Matrix &H) {
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("coercivity", "H^s Gram matrix is not positive definite");
  return llt;
}

} // namespace

double coercivity_estimate(const Matrix &E, const Matrix &H) {
  const double beta = pencil_eigenvalues(E, factor_gram(H)).minCoeff();
  if (!(beta > 0.0))
    throw NumericalFailure("coercivity", "smallest pencil eigenvalue " + std::to_string(beta) +
                                             " is not positive");
  return beta;
}

double nash_ratio(const Vector &u, const Matrix &H, const Vector &m, double lambda) {
  const double l2sq = (m.array() * u.array().square()).sum();
  const double l1 = (m.array() * u.array().abs()).sum();
  const double h2 = u.dot(H * u);
  return std::pow(l2sq, 1.0 + 2.0 / lambda) / (h2 * std::pow(l1, 4.0 / lambda));
}

NashReport nash_check(const Mesh &mesh, const BoundaryMesh &boundary, const Matrix &H,
                      const Vector &m, double lambda, std::size_t samples, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = mesh.max_edge();
  NashReport rep;
  static const char *kinds[] = {"constant", "nonnegative", "sign-mixed", "smooth",
                                "boundary-bump", "interior-bump"};
  for (std::size_t k = 0; k < samples; ++k) {
    const int kind = k == 0 ? 0 : 1 + static_cast<int>((k - 1) % 5);
    Vector u(n);
    switch (kind) {
    case 0:
      u.setOnes();
      break;
    case 1:
      for (Eigen::Index i = 0; i < n; ++i)
        u[i] = U(rng);
      break;
    case 2:
      for (Eigen::Index i = 0; i < n; ++i)
        u[i] = 2.0 * U(rng) - 1.0;
      break;
    case 3: {
      double c[4][4];
      for (auto &row : c)
        for (double &x : row)
          x = 2.0 * U(rng) - 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 p = mesh.vertices[i];
        double v = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            v += c[a][b] * std::cos(a * M_PI * p.x) * std::cos(b * M_PI * p.y);
        u[i] = v;
      }
      break;
    }
    default: {
      Vec2 centre;
      if (kind == 4) {
        const int v = boundary.nodes[static_cast<std::size_t>(U(rng) * boundary.nodes.size()) %
                                     boundary.nodes.size()];
        centre = mesh.vertices[v];
      } else {
        centre = {0.2 + 0.6 * U(rng), 0.2 + 0.6 * U(rng)};
      }
      const double width = h * std::pow(0.25 / h, U(rng));
      for (Eigen::Index i = 0; i < n; ++i)
        u[i] = std::exp(-norm2(mesh.vertices[i] - centre) / (2.0 * width * width));
      break;
    }
    }
    if (u.cwiseAbs().maxCoeff() == 0.0)
      continue;
    const double r = nash_ratio(u, H, m, lambda);
    ++rep.samples;
    if (r > rep.C_emp) {
      rep.C_emp = r;
      rep.worst_kind = kinds[kind];
      rep.worst = u;
    }
  }
  return rep;
}

HoelderReport hoelder_in_t_check(const FormAssembler &fa, const std::vector<double> &times,
                                 double eta) {
  const Matrix &H = fa.hs_gram();
  const auto llt = factor_gram(H);
  HoelderReport rep;
  const double c = 0.5 * fa.coefficients().pack.CNs;
  rep.norm_equivalence = pencil_eigenvalues(c * fa.unit_seminorm(), llt).maxCoeff();
  std::vector<Matrix> E;
  for (double t : times)
    E.push_back(fa.energy(t));
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      const double dt = std::abs(times[j] - times[i]);
      if (dt == 0.0)
        continue;
      const Vector ev = pencil_eigenvalues(E[j] - E[i], llt);
      const double q = ev.cwiseAbs().maxCoeff() / std::pow(dt, eta);
      if (q > rep.constant) {
        rep.constant = q;
        rep.worst_t = times[j];
        rep.worst_tau = times[i];
      }
    }
  }
  return rep;
}

} // namespace wentzell
