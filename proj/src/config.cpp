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

#include "wentzell/config.hpp"

#include "wentzell/error.hpp"
#include "wentzell/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wentzell {

namespace {

using nlohmann::json;

// Reads keys from one object and rejects any that were not consumed.
class Section {
public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw InvalidInput(path_ + " must be an object");
  }

  template <class T> void get(const char *key, T &out) {
    seen_.insert(key);
    if (!j_.contains(key))
      return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception &) {
      throw InvalidInput(path_ + "." + key + " has the wrong type");
    }
  }

  bool has(const char *key) const { return j_.contains(key); }

  Section sub(const char *key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, path_ + "." + key);
  }

  void finish() const {
    for (const auto &item : j_.items())
      if (!seen_.count(item.key()))
        throw InvalidInput("unknown key " + path_ + "." + item.key());
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

CoefficientSpec read_coefficient(Section s, CoefficientSpec c) {
  s.get("preset", c.preset);
  s.get("value", c.value);
  s.get("amplitude", c.amplitude);
  s.get("expr", c.expr);
  s.get("lower", c.lower);
  s.get("upper", c.upper);
  s.get("hoelder", c.hoelder);
  s.finish();
  if (c.preset != "constant" && c.preset != "sinusoidal" && c.preset != "expression")
    throw InvalidInput("unknown coefficient preset '" + c.preset + "'");
  if (c.preset == "expression" && c.expr.empty())
    throw InvalidInput("expression preset needs 'expr'");
  return c;
}

PairCoefficient make_pair(const CoefficientSpec &c, const ExponentInputs &in) {
  if (c.preset == "sinusoidal")
    return sinusoidal_pair(c.amplitude, in.T, in.eta);
  if (c.preset == "expression")
    return expression_pair(c.expr, c.lower, c.upper, c.hoelder);
  return constant_pair(c.value);
}

PointCoefficient make_point(const CoefficientSpec &c, const ExponentInputs &in) {
  if (c.preset == "sinusoidal")
    return sinusoidal_point(c.value, c.amplitude, in.T, in.eta);
  if (c.preset == "expression")
    return expression_point(c.expr, c.lower, c.upper, c.hoelder);
  return constant_point(c.value);
}

} // namespace

std::uint64_t RunConfig::hash() const { return fnv1a(canonical); }

RunConfig parse_config(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
  RunConfig c;
  Section root(j, "config");
  int version = -1;
  root.get("schema_version", version);
  if (version != kSchemaVersion)
    throw InvalidInput("schema_version must be " + std::to_string(kSchemaVersion));

  auto dom = root.sub("domain");
  dom.get("h", c.h);
  dom.get("prefractal_depth", c.prefractal_depth);
  dom.get("prefractal_cells", c.prefractal_cells);
  dom.finish();

  auto ex = root.sub("exponents");
  ex.get("N", c.exponents.N);
  ex.get("d", c.exponents.d);
  ex.get("s", c.exponents.s);
  ex.get("p", c.exponents.p);
  if (ex.has("b_w")) {
    double bw = 0.0;
    ex.get("b_w", bw);
    c.exponents.b_w = bw;
  }
  ex.get("kappa", c.exponents.kappa);
  ex.get("T", c.exponents.T);
  ex.get("eta", c.exponents.eta);
  ex.finish();

  auto co = root.sub("coefficients");
  c.K = read_coefficient(co.sub("K"), c.K);
  c.zeta = read_coefficient(co.sub("zeta"), c.zeta);
  c.b = read_coefficient(co.sub("b"), c.b);
  co.finish();

  auto gr = root.sub("grid");
  gr.get("steps", c.steps);
  gr.get("datum_amplitude", c.datum_amplitude);
  gr.finish();

  auto q = root.sub("quadrature");
  q.get("identical_order", c.assembly.identical_order);
  q.get("edge_order", c.assembly.edge_order);
  q.get("vertex_order", c.assembly.vertex_order);
  q.get("near_order", c.assembly.near_order);
  q.get("boundary_order", c.assembly.boundary_order);
  q.get("boundary_far_order", c.assembly.boundary_far_order);
  q.get("green_order", c.green_order);
  q.get("pv_levels", c.pv.levels);
  q.get("pv_theta_panels", c.pv.theta_panels);
  q.finish();

  auto tol = root.sub("tolerances");
  tol.get("picard_tol", c.picard_tol);
  tol.get("picard_max_iter", c.picard_max_iter);
  tol.get("tol_pos", c.tol_pos);
  tol.get("pv_tol", c.pv.tol);
  tol.get("ultra_h", c.ultra_h);
  tol.get("ultra_dt", c.ultra_dt);
  tol.get("ultra_samples", c.ultra_samples);
  tol.get("fit_lo", c.fit_lo);
  tol.get("fit_hi", c.fit_hi);
  tol.get("random_samples", c.random_samples);
  tol.finish();

  auto run = root.sub("run");
  std::string out = c.out.string();
  run.get("out", out);
  c.out = out;
  run.get("deterministic", c.deterministic);
  run.get("seed", c.seed);
  run.get("threads", c.threads);
  run.finish();
  root.finish();

  if (!(c.h > 0.0 && c.h <= 1.0))
    throw InvalidInput("domain.h must lie in (0, 1]");
  if (c.steps < 2)
    throw InvalidInput("grid.steps must be at least 2");
  if (c.prefractal_depth < 1 || c.prefractal_cells < 1)
    throw InvalidInput("prefractal depth and cells must be positive");
  if (!(c.ultra_dt > 0.0) || c.ultra_samples < 2)
    throw InvalidInput("ultracontractivity grid needs dt > 0 and at least two samples");
  c.assembly.deterministic = c.deterministic;

  // Fails before any computation when a standing hypothesis is violated.
  (void)exponents(c.exponents);
  c.canonical = j.dump();
  return c;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw InvalidInput("cannot read config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

CoefficientSet make_coefficients(const RunConfig &cfg) {
  auto c = default_coefficients(cfg.exponents);
  c.K = make_pair(cfg.K, cfg.exponents);
  c.zeta = make_pair(cfg.zeta, cfg.exponents);
  c.b = make_point(cfg.b, cfg.exponents);
  return c;
}

} // namespace wentzell
