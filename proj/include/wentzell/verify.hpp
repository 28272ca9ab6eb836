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

#include "wentzell/config.hpp"
#include "wentzell/evolution.hpp"
#include "wentzell/green.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wentzell {

struct VerifyRow {
  std::string name;
  std::string anchor; // property checked, in words
  double measured = 0.0;
  std::string target;
  double tolerance = 0.0;
  bool pass = false;
  std::string note; // exception text when the check could not run
};

struct VerifySummary {
  std::vector<VerifyRow> rows; // last row is the coverage row
  bool pass() const;
};

/// Names of every check the suite declares, in execution order.
const std::vector<std::string> &declared_checks();

/// Runs the full property suite; failures mark their row and the suite continues.
VerifySummary verify_suite(const RunConfig &cfg,
                           const std::function<void(const VerifyRow &)> &progress = {});

struct UltraFits {
  PowerFit ultra;  // l^1(m) -> l^inf(m)
  PowerFit smooth; // l^2(m) -> l^{2p}(m)
  double lo = 0.0, hi = 0.0;
  double h = 0.0, dt = 0.0;
  bool frozen = false; // coefficients frozen at t = 0
};

/// Fits on the ultra_h mesh over [fit_lo, fit_hi], defaulting to [10 / lambda_max, 0.1 / lambda_min].
UltraFits ultra_fits(const RunConfig &cfg);

/// l_n table for u = x^2 + y/2, v = 1 + x + y^2/2 on the configured family.
ApproxTable prefractal_table(const RunConfig &cfg, const Mesh &full);

struct ResidualSweep {
  std::vector<double> h, dt, interior, boundary;
};

/// Linear manufactured solution on h / 2^k with dt = T / (40 2^k), residuals at T / 2.
ResidualSweep residual_sweep(const RunConfig &cfg, int levels = 3);

/// Smooth datum amplitude * (1 + cos(pi x) cos(pi y)).
Vector smooth_datum(const Mesh &mesh, double amplitude);

} // namespace wentzell
