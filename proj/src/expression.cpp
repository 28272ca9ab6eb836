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

#include "wentzell/expression.hpp"

#include "wentzell/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace wentzell {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Sin, Cos, Exp, Abs } kind;
  double value = 0.0;
  int var = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string &s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size())
      fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  bool uses_t = false;

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw InvalidInput("expression \"" + s_ + "\": " + msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+'))
        n = make(Kind::Add, n, product());
      else if (accept('-'))
        n = make(Kind::Sub, n, product());
      else
        return n;
    }
  }

  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = make(Kind::Mul, n, unary());
      else if (accept('/'))
        n = make(Kind::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-'))
      return make(Kind::Neg, unary());
    if (accept('+'))
      return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')'))
        fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char *begin = s_.c_str() + pos_;
      char *end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin)
        fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      static const std::vector<std::string> vars{"t", "x1", "x2", "y1", "y2"};
      for (std::size_t k = 0; k < vars.size(); ++k) {
        if (id == vars[k]) {
          if (k == 0)
            uses_t = true;
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Var;
          n->var = static_cast<int>(k);
          return n;
        }
      }
      Kind k;
      if (id == "sin")
        k = Kind::Sin;
      else if (id == "cos")
        k = Kind::Cos;
      else if (id == "exp")
        k = Kind::Exp;
      else if (id == "abs")
        k = Kind::Abs;
      else
        fail("unknown identifier '" + id + "'");
      if (!accept('('))
        fail("expected '(' after " + id);
      NodePtr arg = sum();
      if (!accept(')'))
        fail("expected ')'");
      return make(k, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string &s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node &n, const ExprVars &v) {
  switch (n.kind) {
  case Kind::Number:
    return n.value;
  case Kind::Var:
    switch (n.var) {
    case 0:
      return v.t;
    case 1:
      return v.x1;
    case 2:
      return v.x2;
    case 3:
      return v.y1;
    default:
      return v.y2;
    }
  case Kind::Neg:
    return -eval(*n.a, v);
  case Kind::Add:
    return eval(*n.a, v) + eval(*n.b, v);
  case Kind::Sub:
    return eval(*n.a, v) - eval(*n.b, v);
  case Kind::Mul:
    return eval(*n.a, v) * eval(*n.b, v);
  case Kind::Div:
    return eval(*n.a, v) / eval(*n.b, v);
  case Kind::Sin:
    return std::sin(eval(*n.a, v));
  case Kind::Cos:
    return std::cos(eval(*n.a, v));
  case Kind::Exp:
    return std::exp(eval(*n.a, v));
  case Kind::Abs:
    return std::abs(eval(*n.a, v));
  }
  return 0.0;
}

} // namespace

Expression::Expression(const std::string &source) : source_(source) {
  Parser p(source_);
  root_ = p.parse();
  uses_t_ = p.uses_t;
}

double Expression::operator()(const ExprVars &v) const { return eval(*root_, v); }

} // namespace wentzell
