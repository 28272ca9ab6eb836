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

#include "wentzell/cli.hpp"

#include "wentzell/config.hpp"
#include "wentzell/error.hpp"
#include "wentzell/io.hpp"
#include "wentzell/norms.hpp"
#include "wentzell/parallel.hpp"
#include "wentzell/semilinear.hpp"
#include "wentzell/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace wentzell {

namespace {

namespace fs = std::filesystem;

struct Context {
  RunConfig cfg;
  std::string command;
  std::vector<std::string> files; // relative to cfg.out
  std::ostream *out = nullptr;

  fs::path file(const std::string &name) {
    files.push_back(name);
    const auto p = cfg.out / name;
    fs::create_directories(p.parent_path());
    return p;
  }
};

void write_manifest(Context &ctx) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = ctx.command;
  j["config_hash"] = hex64(ctx.cfg.hash());
  j["seed"] = ctx.cfg.seed;
  j["deterministic"] = ctx.cfg.deterministic;
  auto files = ctx.files;
  std::sort(files.begin(), files.end());
  j["files"] = files;
  std::ofstream(ctx.cfg.out / "manifest.json", std::ios::binary) << j.dump(2) << '\n';
}

void write_failure(Context &ctx, const std::string &kind, const std::string &message,
                   const nlohmann::ordered_json &extra = {}) {
  nlohmann::ordered_json j;
  j["command"] = ctx.command;
  j["kind"] = kind;
  j["message"] = message;
  j["config_hash"] = hex64(ctx.cfg.hash());
  if (!extra.is_null())
    j["details"] = extra;
  fs::create_directories(ctx.cfg.out);
  std::ofstream(ctx.cfg.out / "failure.json", std::ios::binary) << j.dump(2) << '\n';
  ctx.files.push_back("failure.json");
}

class RunFailure : public NumericalFailure {
public:
  RunFailure(std::string kind, const std::string &what, nlohmann::ordered_json details)
      : NumericalFailure(std::move(kind), what), details(std::move(details)) {}
  nlohmann::ordered_json details;
};

void cmd_assemble(Context &ctx) {
  const auto &cfg = ctx.cfg;
  FormAssembler fa(build_unit_square_mesh(cfg.h), make_coefficients(cfg), cfg.assembly);
  const auto &pack = fa.coefficients().pack;
  {
    std::ofstream os(ctx.file("mesh.txt"), std::ios::binary);
    write_mesh(os, fa.mesh());
  }
  const auto snap = fa.snapshot(0.0);
  write_coo(ctx.file("S_int.coo.csv"), snap.S_int);
  write_coo(ctx.file("S_bdy.coo.csv"), snap.S_bdy);
  write_nodal(ctx.file("M_b.csv"), fa.mesh().vertices, snap.M_b);
  write_nodal(ctx.file("M_m.csv"), fa.mesh().vertices, snap.M_m);
  const double beta = coercivity_estimate(snap.E(), fa.hs_gram());
  if (!(beta > 0.0))
    throw NumericalFailure("coercivity", "smallest eigenvalue of (E, H) is " + format_double(beta));
  CsvWriter w(ctx.file("summary.csv"), {"key", "value"});
  auto row = [&](const char *k, double v) {
    w.add(std::string_view(k)).add(v);
    w.end_row();
  };
  row("N", pack.N);
  row("d", pack.d);
  row("s", pack.s);
  row("alpha", pack.alpha);
  row("lambda", pack.lambda);
  row("p", pack.p);
  row("a", pack.a);
  row("b_w", pack.b_w);
  row("q", pack.q);
  row("C_Ns", pack.CNs);
  row("vertices", static_cast<double>(fa.mesh().num_vertices()));
  row("coercivity", beta);
  *ctx.out << "assembled " << fa.mesh().num_vertices() << " nodes, coercivity "
           << format_double(beta) << "\n";
}

void write_trajectory(Context &ctx, const std::string &name, const MildIterate &it,
                      const Mesh &mesh, const Vector &m, double p, double b_w) {
  CsvWriter w(ctx.file(name + ".csv"), {"t", "field", "l2", "l2p", "weighted"});
  for (std::size_t n = 0; n < it.t.size(); ++n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fields/%s_%05zu.csv", name.c_str(), n);
    write_nodal(ctx.file(buf), mesh.vertices, it.u[n]);
    const double l2p = lp_norm(it.u[n], m, 2.0 * p);
    w.add(it.t[n]).add(std::string_view(buf)).add(lp_norm(it.u[n], m, 2.0)).add(l2p);
    w.add(n ? std::pow(it.t[n] - it.t[0], b_w) * l2p : 0.0);
    w.end_row();
  }
}

void cmd_evolve(Context &ctx) {
  const auto &cfg = ctx.cfg;
  FormAssembler fa(build_unit_square_mesh(cfg.h), make_coefficients(cfg), cfg.assembly);
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(pack.T, cfg.steps));
  std::vector<Vector> u{smooth_datum(fa.mesh(), cfg.datum_amplitude)};
  for (std::size_t n = 0; n < cfg.steps; ++n)
    u.push_back(fam.step(u.back(), n));
  const auto it = make_iterate(fam.grid().t, u, fa.mass(), pack.p, pack.b_w);
  write_trajectory(ctx, "evolution", it, fa.mesh(), fa.mass(), pack.p, pack.b_w);
  *ctx.out << "evolved " << cfg.steps << " steps, final l2 "
           << format_double(lp_norm(u.back(), fa.mass(), 2.0)) << "\n";
}

void cmd_semilinear(Context &ctx) {
  const auto &cfg = ctx.cfg;
  FormAssembler fa(build_unit_square_mesh(cfg.h), make_coefficients(cfg), cfg.assembly);
  const auto &pack = fa.coefficients().pack;
  EvolutionFamily fam(fa, TimeGrid::uniform(pack.T, cfg.steps));
  PicardOptions opt;
  opt.kappa = pack.kappa;
  opt.tol = cfg.picard_tol;
  opt.max_iter = cfg.picard_max_iter;
  const auto r = picard_solve(smooth_datum(fa.mesh(), cfg.datum_amplitude), fam,
                              power_nonlinearity(pack.p), pack, opt);
  {
    CsvWriter w(ctx.file("convergence.csv"), {"iteration", "distance", "ratio"});
    for (std::size_t k = 0; k < r.distances.size(); ++k) {
      w.add(static_cast<long long>(k + 1)).add(r.distances[k]);
      w.add(k ? r.distances[k] / r.distances[k - 1] : std::nan(""));
      w.end_row();
    }
  }
  if (r.status != PicardStatus::converged) {
    nlohmann::ordered_json d;
    d["status"] = to_string(r.status);
    d["iterations"] = r.iterations;
    d["distances"] = r.distances;
    d["window_measured"] = r.window.measured;
    d["kappa"] = r.window.kappa;
    throw RunFailure(to_string(r.status), r.message, d);
  }
  write_trajectory(ctx, "solution", r.solution, fa.mesh(), fa.mass(), pack.p, pack.b_w);
  *ctx.out << "picard converged in " << r.iterations << " iterations, contraction ratio "
           << format_double(r.contraction_ratio) << ", residual " << format_double(r.residual)
           << "\n";
}

void cmd_verify(Context &ctx) {
  CsvWriter w(ctx.file("verify.csv"),
              {"name", "property", "measured", "target", "tolerance", "pass", "note"});
  const auto summary = verify_suite(ctx.cfg, [&](const VerifyRow &r) {
    *ctx.out << (r.pass ? "PASS " : "FAIL ") << r.name << " measured " << format_double(r.measured)
             << " target " << r.target << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    ctx.out->flush();
  });
  for (const auto &r : summary.rows) {
    w.add(std::string_view(r.name)).add(std::string_view(r.anchor)).add(r.measured);
    w.add(std::string_view(r.target)).add(r.tolerance).add(r.pass).add(std::string_view(r.note));
    w.end_row();
  }
  const auto passed = std::count_if(summary.rows.begin(), summary.rows.end(),
                                    [](const VerifyRow &r) { return r.pass; });
  *ctx.out << "suite " << (summary.pass() ? "PASS" : "FAIL") << ": " << passed << "/"
           << summary.rows.size() << " rows pass\n";
}

void cmd_fit_ultra(Context &ctx) {
  const auto f = ultra_fits(ctx.cfg);
  const auto pack = exponents(ctx.cfg.exponents);
  for (auto [name, fit] : {std::pair{"ultra", &f.ultra}, std::pair{"smoothing", &f.smooth}}) {
    CsvWriter w(ctx.file(std::string(name) + ".csv"), {"t", "value"});
    for (std::size_t k = 0; k < fit->t.size(); ++k) {
      w.add(fit->t[k]).add(fit->value[k]);
      w.end_row();
    }
  }
  CsvWriter w(ctx.file("fit.csv"), {"fit", "exponent", "prefactor", "log_residual", "target",
                                    "window_lo", "window_hi", "h", "dt"});
  for (auto [name, fit, target] : {std::tuple{"l1_linf", &f.ultra, pack.lambda / 2},
                                   std::tuple{"l2_l2p", &f.smooth, pack.a}}) {
    w.add(std::string_view(name)).add(fit->exponent).add(fit->prefactor).add(fit->residual);
    w.add(target).add(f.lo).add(f.hi).add(f.h).add(f.dt);
    w.end_row();
  }
  *ctx.out << "l1->linf exponent " << format_double(f.ultra.exponent) << " (lambda/2 = "
           << format_double(pack.lambda / 2) << "), l2->l2p exponent "
           << format_double(f.smooth.exponent) << " (a = " << format_double(pack.a) << ")\n";
}

void cmd_green_check(Context &ctx) {
  const auto &cfg = ctx.cfg;
  FormAssembler fa(build_unit_square_mesh(cfg.h), make_coefficients(cfg), cfg.assembly);
  const auto &mesh = fa.mesh();
  Vector u(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    u[static_cast<Eigen::Index>(i)] = mesh.vertices[i].x * mesh.vertices[i].x + 0.5 * mesh.vertices[i].y;
  const auto c = conormal(fa, u, 0.0, cfg.pv, cfg.green_order);
  {
    CsvWriter w(ctx.file("conormal.csv"), {"node", "x", "y", "g"});
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      const auto p = mesh.vertices[static_cast<std::size_t>(c.nodes[i])];
      w.add(static_cast<long long>(c.nodes[i])).add(p.x).add(p.y).add(c.g[static_cast<Eigen::Index>(i)]);
      w.end_row();
    }
  }
  const auto tab = prefractal_table(cfg, mesh);
  {
    CsvWriter w(ctx.file("prefractal.csv"), {"n", "delta", "area", "l_n", "error", "ratio"});
    for (std::size_t k = 0; k < tab.rows.size(); ++k) {
      const auto &r = tab.rows[k];
      w.add(static_cast<long long>(r.n)).add(r.delta).add(r.area).add(r.l_n).add(r.error);
      w.add(k ? r.error / tab.rows[k - 1].error : std::nan(""));
      w.end_row();
    }
  }
  const auto sw = residual_sweep(cfg);
  {
    CsvWriter w(ctx.file("residuals.csv"), {"h", "dt", "t", "interior", "boundary"});
    for (std::size_t k = 0; k < sw.h.size(); ++k) {
      w.add(sw.h[k]).add(sw.dt[k]).add(0.5 * fa.coefficients().pack.T).add(sw.interior[k]).add(sw.boundary[k]);
      w.end_row();
    }
  }
  *ctx.out << "l_full " << format_double(tab.l_full) << ", |l_last - l| / |l_1 - l| "
           << format_double(tab.rows.back().error / tab.rows.front().error) << "\n";
}

} // namespace

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Solver and verification suite for the non-autonomous fractional Wentzell problem"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool deterministic = false;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"assemble", "assemble the forms and write COO matrices"},
      {"evolve", "propagate the smooth datum with the linear evolution family"},
      {"semilinear", "solve the semilinear problem by Picard iteration"},
      {"verify", "run the full property suite"},
      {"fit-ultra", "fit the smoothing decay exponents"},
      {"green-check", "conormal functional, prefractal limit and strong residuals"}};
  for (const auto &[name, help] : commands) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker thread cap (0 = all cores)");
    sub->add_flag("--deterministic", deterministic, "fixed reduction order");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  Context ctx;
  ctx.out = &out;
  ctx.command = app.get_subcommands().front()->get_name();
  try {
    ctx.cfg = load_config(config);
    if (out_dir)
      ctx.cfg.out = *out_dir;
    if (seed)
      ctx.cfg.seed = *seed;
    if (threads)
      ctx.cfg.threads = *threads;
    if (deterministic) {
      ctx.cfg.deterministic = true;
      ctx.cfg.assembly.deterministic = true;
    }
    const auto report = validate_hypotheses(make_coefficients(ctx.cfg), 200, ctx.cfg.seed);
    if (!report.pass())
      throw HypothesisViolation(report.failures());
  } catch (const Error &e) {
    err << "invalid config: " << e.what() << "\n";
    return 1;
  }
  set_thread_budget(ctx.cfg.threads);

  int code = 0;
  try {
    fs::create_directories(ctx.cfg.out);
    if (ctx.command == "assemble")
      cmd_assemble(ctx);
    else if (ctx.command == "evolve")
      cmd_evolve(ctx);
    else if (ctx.command == "semilinear")
      cmd_semilinear(ctx);
    else if (ctx.command == "verify")
      cmd_verify(ctx);
    else if (ctx.command == "fit-ultra")
      cmd_fit_ultra(ctx);
    else
      cmd_green_check(ctx);
  } catch (const RunFailure &e) {
    err << "numerical failure: " << e.what() << "\n";
    write_failure(ctx, e.kind(), e.what(), e.details);
    code = 2;
  } catch (const NumericalFailure &e) {
    err << "numerical failure: " << e.what() << "\n";
    write_failure(ctx, e.kind(), e.what());
    code = 2;
  } catch (const InvalidInput &e) {
    err << "invalid input: " << e.what() << "\n";
    write_failure(ctx, "invalid-input", e.what());
    code = 1;
  } catch (const HypothesisViolation &e) {
    err << "invalid config: " << e.what() << "\n";
    write_failure(ctx, "hypothesis", e.what());
    code = 1;
  } catch (const std::exception &e) {
    err << "numerical failure: " << e.what() << "\n";
    write_failure(ctx, "error", e.what());
    code = 2;
  }
  write_manifest(ctx);
  return code;
}

} // namespace wentzell
