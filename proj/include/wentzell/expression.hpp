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

#include <memory>
#include <string>

namespace wentzell {

/// Variables visible to coefficient expressions.
struct ExprVars {
  double t = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
};

/// Arithmetic expression over t, x1, x2, y1, y2 with + - * /, unary minus,
/// parentheses and the functions sin, cos, exp, abs.
class Expression {
public:
  explicit Expression(const std::string &source);

  double operator()(const ExprVars &v) const;
  const std::string &source() const { return source_; }
  bool depends_on_time() const { return uses_t_; }

  struct Node;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  bool uses_t_ = false;
};

} // namespace wentzell
