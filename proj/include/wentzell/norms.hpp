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

#include "wentzell/types.hpp"

namespace wentzell {

/// l^p(m) norm with lumped weights m; p = infinity gives the largest nodal
/// magnitude (the larger of the interior and boundary sup norms).
double lp_norm(const Vector &u, const Vector &m, double p);

/// Operator norms of an explicit matrix between weighted spaces.
double op_norm_1(const Matrix &U, const Vector &m);   // l^1(m) -> l^1(m)
double op_norm_inf(const Matrix &U);                  // l^inf -> l^inf
double op_norm_2(const Matrix &U, const Vector &m, int iterations = 200); // power iteration
double op_norm_1_inf(const Matrix &U, const Vector &m); // max_ij |U_ij| / m_j

/// ||U||_{l^2(m) -> l^q(m)} by the nonlinear power method; exact at the fixed
/// point for entrywise nonnegative U.
double op_norm_2_q(const Matrix &U, const Vector &m, double q, int iterations = 500,
                   double tol = 1e-12);

} // namespace wentzell
