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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wentzell {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range user input (mesh size, exponents, config keys).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Mesh topology problems: open boundaries, non-manifold edges.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// One or more standing hypotheses on the data failed. Each entry of
/// violations() names the inequality that does not hold.
class HypothesisViolation : public Error {
public:
  explicit HypothesisViolation(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string> &violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string> &v) {
    std::string out = "hypothesis violated: ";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i)
        out += "; ";
      out += v[i];
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// A numerical procedure broke down (coercivity lost, P.V. did not
/// converge, fixed-point iteration did not contract).
class NumericalFailure : public Error {
public:
  NumericalFailure(std::string kind, const std::string &what)
      : Error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string &kind() const { return kind_; }

private:
  std::string kind_;
};

} // namespace wentzell
