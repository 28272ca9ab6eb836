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
#include "wentzell/coefficients.hpp"
#include "wentzell/green.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace wentzell {

inline constexpr int kSchemaVersion = 1;

/// Coefficient preset: "constant" (value), "sinusoidal" (1 + amplitude sin t,
/// or value + amplitude sin t for b) or "expression" (expr with bounds).
struct CoefficientSpec {
  std::string preset = "constant";
  double value = 1.0;
  double amplitude = 0.0;
  std::string expr;
  double lower = 0.0;
  double upper = 0.0;
  double hoelder = 0.0;
};

struct RunConfig {
  // domain
  double h = 0.125;
  int prefractal_depth = 5;
  int prefractal_cells = 8;
  // exponents
  ExponentInputs exponents;
  // coefficients
  CoefficientSpec K, zeta, b;
  // time grid on [0, T]
  std::size_t steps = 20;
  double datum_amplitude = 0.05;
  // quadrature
  AssemblyOptions assembly;
  int green_order = 3;
  PvOptions pv;
  // tolerances
  double picard_tol = 1e-10;
  int picard_max_iter = 200;
  double tol_pos = 1e-8;
  double ultra_h = 0.03125;
  double ultra_dt = 2.5e-4;
  std::size_t ultra_samples = 9;
  double fit_lo = 0.0; // 0 selects 10 / lambda_max
  double fit_hi = 0.0; // 0 selects 0.1 / lambda_min
  int random_samples = 50;
  // run
  std::filesystem::path out = "out";
  bool deterministic = true;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  std::string canonical; // normalized JSON text used for hashing
  std::uint64_t hash() const;
};

/// Parses and validates; throws InvalidInput on malformed JSON, unknown keys
/// or a schema mismatch, HypothesisViolation when the exponent pack fails.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::filesystem::path &path);

CoefficientSet make_coefficients(const RunConfig &cfg);

} // namespace wentzell
