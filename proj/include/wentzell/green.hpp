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
#include "wentzell/semilinear.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wentzell {

/// Point location and P1 evaluation on a mesh through a uniform bucket grid.
class MeshLocator {
public:
  explicit MeshLocator(const Mesh &mesh);

  /// Triangle containing p (closed, with relative slack), or -1.
  int locate(const Vec2 &p) const;
  std::array<double, 3> barycentric(int tri, const Vec2 &p) const;
  double evaluate(const Vector &u, const Vec2 &p) const; // throws InvalidInput outside
  const Mesh &mesh() const { return mesh_; }

private:
  const Mesh &mesh_;
  Vec2 lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

struct PvOptions {
  double eps0 = 0.0;     // <= 0 picks half the distance to the nearest kink or the boundary
  double ratio = 0.25;   // eps_{k+1} = ratio eps_k
  int levels = 4;
  int theta_panels = 64; // multiple of 4, so panel breaks include the axis directions
  int theta_order = 4;
  int radial_order = 4;
  double tol = 1e-6;     // relative change between the last two extrapolated values
};

struct PvResult {
  double value = 0.0; // Richardson-extrapolated limit
  std::vector<double> eps;
  std::vector<double> truncated;
};

/// P.V. evaluation of C_{N,s} int_Omega K(t,x,y) (u(x) - u(y)) |x-y|^{-2-2s} dy.
class RegionalOperator {
public:
  RegionalOperator(const Mesh &mesh, PairCoefficient K, double s, PvOptions opt = {});

  PvResult apply(const Vector &u, double t, const Vec2 &x) const;
  /// Values at many points; throws NumericalFailure("pv") on the first failure.
  std::vector<double> apply_many(const Vector &u, double t, const std::vector<Vec2> &xs) const;

  const MeshLocator &locator() const { return loc_; }
  double distance_to_boundary(const Vec2 &x) const;

private:
  double truncated_integral(const Vector &u, double t, const Vec2 &x, int tri,
                            const std::vector<double> &eps, std::vector<double> &out) const;

  const Mesh &mesh_;
  MeshLocator loc_;
  PairCoefficient K_;
  double s_;
  double CNs_;
  PvOptions opt_;
  std::vector<std::array<Vec2, 2>> boundary_edges_;
};

PvResult regional_laplacian_apply(const Mesh &mesh, const PairCoefficient &K, double s,
                                  const Vector &u, double t, const Vec2 &x,
                                  const PvOptions &opt = {});

struct WeightedPoint {
  Vec2 p;
  double w;
};

/// Rule on a triangle split at its centroid, graded quadratically toward every edge
/// and toward the vertices; 6 n^2 points.
std::vector<WeightedPoint> graded_triangle_rule(const std::array<Vec2, 3> &T, int n);

struct VolumeTerms {
  double pv_term = 0.0;   // int_Omega (B u) v
  double form_term = 0.0; // (C_{N,s}/2) (u, v)_{s,K}
  double l() const { return -pv_term + form_term; }
};

/// Both volume terms of the Green formula for nodal fields u, v; S_int is
/// (C_{N,s}/2) times the interior form at time t.
VolumeTerms green_volume_terms(const RegionalOperator &B, const Matrix &S_int, const Vector &u,
                               const Vector &v, double t, int order = 3);

struct ConormalFunctional {
  double t = 0.0;
  std::vector<int> nodes; // boundary vertices, loop order
  Vector g;               // g_i = <C_s N u, trace of phi_i>

  double pairing(const Vector &v) const; // sum_i g_i v(nodes[i])
};

ConormalFunctional conormal(const FormAssembler &fa, const Vector &u, double t,
                            const PvOptions &opt = {}, int order = 3);

struct ApproxRow {
  int n = 0;
  double delta = 0.0;
  double area = 0.0;
  double l_n = 0.0;
  double error = 0.0; // |l_n - l_full|
};

struct ApproxTable {
  double l_full = 0.0;
  std::vector<ApproxRow> rows;
  bool monotone_area = false;
  bool cauchy_decrease = false; // errors nonincreasing along the family
};

/// l_n(u, v) on each prefractal domain with u, v interpolated from the full mesh.
ApproxTable lipschitz_approx_convergence(const Mesh &full, const Vector &u, const Vector &v,
                                         const PrefractalFamily &family, const PairCoefficient &K,
                                         double s, double t, const AssemblyOptions &aopt = {},
                                         const PvOptions &popt = {}, int order = 3);

struct StrongResiduals {
  double t = 0.0;
  Vector interior;            // per node at distance >= max(2h, margin) from the boundary, else 0
  double interior_norm = 0.0; // l2(Lambda) over those nodes
  Vector boundary;            // dual vector on boundary nodes (loop order)
  double boundary_norm = 0.0; // sqrt(R^T G^{-1} R), G = Theta[zeta = 1] + diag(mu)
};

/// Residuals of du/dt + B u = J(u) and of the boundary equation at grid time t,
/// with du/dt from central differences (one-sided at the ends) and B u through its
/// Galerkin representative.
StrongResiduals strong_residuals(const FormAssembler &fa, const MildIterate &solution,
                                 const Nonlinearity &J, double t, double margin = 0.0);

} // namespace wentzell
