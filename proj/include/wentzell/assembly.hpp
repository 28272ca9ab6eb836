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

#include "wentzell/coefficients.hpp"
#include "wentzell/geometry.hpp"
#include "wentzell/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace wentzell {

struct AssemblyOptions {
  int identical_order = 6;
  int edge_order = 6;
  int vertex_order = 5;
  int near_order = 4;         // collapsed tensor rule per triangle for close pairs
  double near_ratio = 2.5;    // centroid distance / diameter below which near_order is used
  double far_ratio = 6.0;     // beyond this the 3-point rule is used, 7-point in between
  int boundary_order = 8;     // touching boundary segments
  int boundary_far_order = 6; // Gauss-Legendre per segment for separated segments
  bool deterministic = true;
  unsigned chunks = 8; // fixed partition used when deterministic
};

/// Spatial kernel g(x, y); an empty function means g = 1.
using SpatialKernel = std::function<double(const Vec2 &, const Vec2 &)>;

/// Double integral over Omega x Omega of g (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) |x-y|^{-2-2s},
/// without normalization constant.
Matrix assemble_interior_raw(const Mesh &mesh, const SpatialKernel &g, double s,
                             const AssemblyOptions &opt);

/// (C_{N,s}/2) times the raw interior form with kernel K(t,.,.).
Matrix assemble_interior(const Mesh &mesh, const PairCoefficient &K, double t, double s,
                         const AssemblyOptions &opt);

/// Double integral over the boundary of g (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) |x-y|^{-d-2 alpha}.
Matrix assemble_theta_raw(const Mesh &mesh, const BoundaryMesh &boundary, const SpatialKernel &g,
                          double alpha, const AssemblyOptions &opt);

Matrix assemble_theta(const Mesh &mesh, const BoundaryMesh &boundary, const PairCoefficient &zeta,
                      double t, double alpha, const AssemblyOptions &opt);

/// Lumped diagonal b(t, P_i) mu_i; throws HypothesisViolation when b <= 0 at a node.
Vector assemble_boundary_mass(const Mesh &mesh, const BoundaryMesh &boundary,
                              const PointCoefficient &b, double t);

/// Lumped diagonal of the L2(Omega, m) mass.
Vector assemble_mass_m(const Mesh &mesh, const BoundaryMesh &boundary);

struct FormSnapshot {
  double t = 0.0;
  Matrix S_int;
  Matrix S_bdy;
  Vector M_b;
  Vector M_m;

  Matrix E() const;
};

/// Assembles snapshots, reusing spatial matrices for separable kernels.
class FormAssembler {
public:
  FormAssembler(Mesh mesh, CoefficientSet coeffs, AssemblyOptions opt = {});

  FormSnapshot snapshot(double t) const;
  /// Energy matrix E_h(t) = S_int + S_bdy + diag(M_b).
  Matrix energy(double t) const;

  /// Discrete H^s Gram: (2/C_{N,s}) S_int[K = 1] + diag(M_m).
  const Matrix &hs_gram() const;
  /// (2/C_{N,s}) S_int[K = 1].
  const Matrix &unit_seminorm() const;
  /// S_bdy[zeta = 1] + diag(mu).
  Matrix boundary_gram() const;

  const Mesh &mesh() const { return mesh_; }
  const BoundaryMesh &boundary() const { return boundary_; }
  const CoefficientSet &coefficients() const { return coeffs_; }
  const AssemblyOptions &options() const { return opt_; }
  const Vector &mass() const { return M_m_; }
  bool autonomous() const { return coeffs_.time_constant(); }

private:
  const Matrix &interior_spatial() const;
  const Matrix &theta_spatial() const;

  Mesh mesh_;
  BoundaryMesh boundary_;
  CoefficientSet coeffs_;
  AssemblyOptions opt_;
  Vector M_m_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Matrix> int_spatial_, theta_spatial_, unit_, gram_, theta_unit_;
};

// Diagnostics on assembled forms.

/// Smallest eigenvalue of the pencil (E, H).
double coercivity_estimate(const Matrix &E, const Matrix &H);

struct NashReport {
  double C_emp = 0.0;
  std::size_t samples = 0;
  std::string worst_kind;
  Vector worst;
};

/// max ||u||_{L2(m)}^{2+4/lambda} / (||u||_H^2 ||u||_{L1(m)}^{4/lambda}) over random samples.
NashReport nash_check(const Mesh &mesh, const BoundaryMesh &boundary, const Matrix &H,
                      const Vector &m, double lambda, std::size_t samples, std::uint64_t seed);

double nash_ratio(const Vector &u, const Matrix &H, const Vector &m, double lambda);

struct HoelderReport {
  double constant = 0.0;
  double worst_t = 0.0;
  double worst_tau = 0.0;
  double norm_equivalence = 0.0; // max eigenvalue of (unit seminorm, H)
};

/// max over grid pairs of sup_{u,v} |E(t)(u,v) - E(tau)(u,v)| / (|t-tau|^eta ||u||_H ||v||_H).
HoelderReport hoelder_in_t_check(const FormAssembler &fa, const std::vector<double> &times,
                                 double eta);

} // namespace wentzell
