// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "robsem/hjb.hpp"
#include "robsem/iteration.hpp"
#include "robsem/sensitivity.hpp"

namespace robsem::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(const Penalty& pen) {
  switch (pen.kind()) {
    case PenaltyKind::Ball: return "ball(" + format_double(pen.ball_radius()) + ")";
    case PenaltyKind::Power:
      return "power(" + format_double(pen.exponent()) + "," + format_double(pen.scale()) + ")";
    case PenaltyKind::Table: return "table";
  }
  return "unknown";
}

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c,
                                                          const std::string& command) {
  return {{"robsem", "0.1.0"},
          {"command", command},
          {"config_hash", hex64(c.hash)},
          {"seed", std::to_string(c.seed)},
          {"model", c.model.name()},
          {"penalty", describe(c.penalty)},
          {"chart", c.model.chart() == Chart::Log ? "log" : "identity"}};
}

json header(const RunConfig& c, const std::string& command) {
  json j;
  for (const auto& [k, v] : metadata(c, command)) j[k] = v;
  j["t"] = c.t;
  return j;
}

/// Writes JSON; non-finite numbers become null.
void write_json(const RunConfig& c, const std::string& name, const json& j) {
  write_atomic(fs::path(c.out_dir) / name, j.dump(2) + "\n");
}

void write_csv(const RunConfig& c, const std::string& name, const CsvTable& table) {
  write_atomic(fs::path(c.out_dir) / name, table.str());
}

TestFunction initial(const RunConfig& c) {
  return TestFunction(sample_function(c.function, c.x_min, c.x_max, c.n_nodes));
}

IterationOptions iteration_options(const RunConfig& c) {
  IterationOptions io;
  io.n_atoms = c.n_atoms;
  return io;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// max over nodes of (b - a).
double max_excess(const GridFunction& a, const GridFunction& b) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, b.values()[k] - a.values()[k]);
  return worst;
}

GridFunction apply_T_grid(const RunConfig& c, const TestFunction& u) {
  return compose(c.model, c.penalty, Partition({0.0, c.t}), u, StepKind::T, iteration_options(c)).u;
}

HjbResult solve_hjb(const RunConfig& c, const TestFunction& u, std::size_t n_nodes,
                    std::size_t stride) {
  const PdeProblem problem = PdeProblem::from_model(c.model, c.penalty, c.x_min, c.x_max, n_nodes,
                                                    c.t, u.lipschitz, c.hjb_dt);
  const GridFunction u0 = n_nodes == c.n_nodes
                              ? u.u
                              : sample_function(c.function, c.x_min, c.x_max, n_nodes);
  return solve(problem, u0, stride);
}

struct LevelChecks {
  double dyadic_max_increase = -std::numeric_limits<double>::infinity();
  double nisio_max_decrease = -std::numeric_limits<double>::infinity();
  double sandwich_max_violation = -std::numeric_limits<double>::infinity();
};

LevelChecks check_levels(const SEstimate& est, const GridFunction& T) {
  LevelChecks out;
  const auto& d = est.dyadic.levels;
  const auto& n = est.nisio.levels;
  for (std::size_t k = 1; k < d.size(); ++k) {
    out.dyadic_max_increase = std::max(out.dyadic_max_increase, max_excess(d[k - 1], d[k]));
  }
  for (std::size_t k = 1; k < n.size(); ++k) {
    out.nisio_max_decrease = std::max(out.nisio_max_decrease, max_excess(n[k], n[k - 1]));
  }
  for (std::size_t k = 0; k < d.size(); ++k) {
    const GridFunction& lower = n.empty() ? T : n[k];
    out.sandwich_max_violation = std::max(out.sandwich_max_violation, max_excess(d[k], lower));
    if (!n.empty()) {
      out.sandwich_max_violation = std::max(out.sandwich_max_violation, max_excess(n[k], T));
    }
    out.sandwich_max_violation = std::max(out.sandwich_max_violation, max_excess(d[0], d[k]));
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

int cmd_iterate(const RunConfig& c, std::ostream& log) {
  const auto start = Clock::now();
  const TestFunction u = initial(c);
  const SEstimate est = estimate_S(c.model, c.penalty, c.t, u, c.n_levels, false, iteration_options(c));
  const GridFunction T = apply_T_grid(c, u);

  CsvTable dyadic(metadata(c, "iterate"), {"level", "x", "value"});
  for (std::size_t k = 0; k < est.dyadic.levels.size(); ++k) {
    const GridFunction& g = est.dyadic.levels[k];
    for (std::size_t j = 0; j < g.size(); ++j) {
      dyadic.add_row({static_cast<double>(k), g.node(j), g.values()[j]});
    }
  }
  write_csv(c, "iterate.csv", dyadic);
  if (!est.nisio.levels.empty()) {
    CsvTable nisio(metadata(c, "iterate"), {"level", "x", "value"});
    for (std::size_t k = 0; k < est.nisio.levels.size(); ++k) {
      const GridFunction& g = est.nisio.levels[k];
      for (std::size_t j = 0; j < g.size(); ++j) {
        nisio.add_row({static_cast<double>(k), g.node(j), g.values()[j]});
      }
    }
    write_csv(c, "nisio.csv", nisio);
  }

  const LevelChecks chk = check_levels(est, T);
  const bool passed = chk.dyadic_max_increase <= c.tolerance &&
                      (est.nisio.levels.empty() || chk.nisio_max_decrease <= c.tolerance) &&
                      chk.sandwich_max_violation <= c.tolerance;
  json j = header(c, "iterate");
  j["n_levels"] = c.n_levels;
  j["bracket_widths"] = est.bracket_widths;
  j["decrements"] = est.decrements;
  j["boundary_evaluations"] = {{"dyadic", est.dyadic.boundary_evaluations},
                               {"nisio", est.nisio.boundary_evaluations}};
  j["flow_clamps"] = {{"dyadic", est.dyadic.flow_clamps}, {"nisio", est.nisio.flow_clamps}};
  j["checks"] = {{"tolerance", c.tolerance},
                 {"dyadic_max_increase", finite_or_null(chk.dyadic_max_increase)},
                 {"nisio_max_decrease", finite_or_null(chk.nisio_max_decrease)},
                 {"sandwich_max_violation", finite_or_null(chk.sandwich_max_violation)},
                 {"passed", passed}};
  if (c.timings) j["runtime_seconds"] = seconds_since(start);
  write_json(c, "iterate.json", j);
  if (!passed) {
    log << "iterate: level ordering violated beyond tolerance " << c.tolerance << "\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_hjb(const RunConfig& c, std::ostream& log) {
  const auto start = Clock::now();
  const TestFunction u = initial(c);
  const PdeProblem problem = PdeProblem::from_model(c.model, c.penalty, c.x_min, c.x_max,
                                                    c.n_nodes, c.t, u.lipschitz, c.hjb_dt);
  std::size_t stride = c.snapshot_stride;
  if (stride == 0) {
    const double dt = c.hjb_dt > 0.0 ? c.hjb_dt : problem.stable_dt();
    const auto steps = static_cast<std::size_t>(std::ceil(c.t / std::max(dt, 1e-300)));
    stride = std::max<std::size_t>(1, steps / 10);
  }
  const HjbResult fine = solve(problem, u.u, stride);

  CsvTable table(metadata(c, "hjb"), {"t", "x", "value"});
  for (const HjbSnapshot& s : fine.snapshots) {
    for (std::size_t k = 0; k < s.u.size(); ++k) table.add_row({s.t, s.u.node(k), s.u.values()[k]});
  }
  write_csv(c, "hjb.csv", table);

  json j = header(c, "hjb");
  j["dt"] = fine.dt;
  j["steps"] = fine.steps;
  const ResidualReport visc = viscosity_residual(problem, fine.snapshots);
  j["viscosity"] = {{"max_residual", visc.max_residual},
                    {"checked", visc.checked},
                    {"kinks", visc.kinks}};
  if ((c.n_nodes - 1) % 2 == 0 && c.n_nodes >= 5) {
    // Refinement study against the grid with every other node.
    const std::size_t coarse_nodes = (c.n_nodes - 1) / 2 + 1;
    const HjbResult coarse = solve_hjb(c, u, coarse_nodes, 0);
    double diff = 0.0;
    for (std::size_t k = 0; k < coarse_nodes; ++k) {
      diff = std::max(diff, std::abs(coarse.u.values()[k] - fine.u.values()[2 * k]));
    }
    j["refinement"] = {{"coarse_nodes", coarse_nodes}, {"sup_difference", diff}};
  }
  if (c.timings) j["runtime_seconds"] = seconds_since(start);
  write_json(c, "hjb.json", j);
  log << "hjb: " << fine.steps << " steps of " << fine.dt << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& c, std::ostream& log) {
  const auto start = Clock::now();
  const TestFunction u = initial(c);
  const GridFunction T = apply_T_grid(c, u);
  const SEstimate est = estimate_S(c.model, c.penalty, c.t, u, c.n_levels, false, iteration_options(c));
  const HjbResult pde = solve_hjb(c, u, c.n_nodes, 0);
  const GridFunction& S = est.dyadic.levels.back();
  const GridFunction& I = est.dyadic.levels.front();
  const bool has_nisio = !est.nisio.levels.empty();

  CsvTable table(metadata(c, "compare"), {"x", "T", "N_approx", "S_approx", "I", "hjb"});
  double gap_s_hjb = 0.0;
  double gap_n_hjb = has_nisio ? 0.0 : kNaN;
  double ordering = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.n_nodes; ++k) {
    const double t = T.values()[k];
    const double n = has_nisio ? est.nisio.levels.back().values()[k] : kNaN;
    const double s = S.values()[k];
    const double i = I.values()[k];
    const double h = pde.u.values()[k];
    table.add_row({S.node(k), t, n, s, i, h});
    gap_s_hjb = std::max(gap_s_hjb, std::abs(s - h));
    if (has_nisio) {
      gap_n_hjb = std::max(gap_n_hjb, std::abs(n - h));
      ordering = std::max({ordering, t - n, n - s});
    } else {
      ordering = std::max(ordering, t - s);
    }
    ordering = std::max(ordering, s - i);
  }
  write_csv(c, "compare.csv", table);

  const bool passed = ordering <= c.tolerance;
  json j = header(c, "compare");
  j["sup_gap_S_hjb"] = gap_s_hjb;
  j["sup_gap_N_hjb"] = finite_or_null(gap_n_hjb);
  j["bracket_width"] = est.bracket_widths.empty() ? json(nullptr) : json(est.bracket_widths.back());
  j["ordering_max_violation"] = ordering;
  j["tolerance"] = c.tolerance;
  j["passed"] = passed;
  if (c.timings) j["runtime_seconds"] = seconds_since(start);
  write_json(c, "compare.json", j);
  if (!passed) {
    log << "compare: ordering T <= N <= S <= I violated by " << ordering << "\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_sensitivity(const RunConfig& c, std::ostream& log) {
  const auto start = Clock::now();
  const TestFunction u = initial(c);
  SensitivityOptions opts;
  opts.n_atoms = c.n_atoms;
  opts.s_levels = c.s_levels;
  opts.mc_samples = c.mc_samples;
  opts.seed = c.seed;
  opts.s_tolerance = c.tolerance;
  const SensitivityReport rep = global_bound(c.model, c.penalty, c.t, u, opts);

  std::vector<std::string> cols{"x", "T", "I", "S", "bound"};
  if (!rep.T_mc.empty()) cols.emplace_back("T_mc");
  CsvTable table(metadata(c, "sensitivity"), cols);
  for (std::size_t k = 0; k < rep.x.size(); ++k) {
    std::vector<double> row{rep.x[k], rep.T[k], rep.I[k], rep.S.empty() ? kNaN : rep.S[k],
                            rep.bound[k]};
    if (!rep.T_mc.empty()) row.push_back(rep.T_mc[k]);
    table.add_row(row);
  }
  write_csv(c, "sensitivity.csv", table);

  std::vector<double> xs;
  for (int i = 0; i < c.samples; ++i) {
    xs.push_back(c.samples == 1 ? c.sample_lo
                                : c.sample_lo + (c.sample_hi - c.sample_lo) * i / (c.samples - 1));
  }
  SensitivityOptions exp_opts = opts;
  exp_opts.s_levels = 0;
  const Builtin b = make_builtin(c.function);
  const ExpansionReport first =
      first_order_expansion(c.model, c.penalty, u, xs, c.h_sequence, b.df, exp_opts);
  const bool centred = c.model.noise_mean(1.0) == 0.0;
  ExpansionReport mart;
  if (centred) mart = martingale_expansion(c.model, c.penalty, u, xs, c.h_sequence, exp_opts);

  CsvTable exp_table(metadata(c, "sensitivity"), {"h", "residual_I", "residual_mart"});
  for (std::size_t k = 0; k < first.rows.size(); ++k) {
    exp_table.add_row({first.rows[k].h, first.rows[k].residual,
                       centred ? mart.rows[k].residual : kNaN});
  }
  write_csv(c, "expansion.csv", exp_table);

  json j = header(c, "sensitivity");
  j["max_gap"] = rep.max_gap;
  j["min_slack"] = rep.min_slack;
  j["bound"] = rep.bound.empty() ? 0.0 : rep.bound.front();
  j["first_order_converging"] = first.converging;
  j["martingale_converging"] = centred ? json(mart.converging) : json(nullptr);
  if (c.timings) j["runtime_seconds"] = seconds_since(start);
  write_json(c, "sensitivity.json", j);
  if (!first.converging || (centred && !mart.converging)) {
    log << "sensitivity: expansion residual does not decrease over the last three steps\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_consistency(const RunConfig& c, std::ostream& log) {
  const auto start = Clock::now();
  const TestFunction u = initial(c);
  const std::vector<double> xs = u.u.nodes();
  CsvTable table(metadata(c, "consistency"), {"n_atoms", "residual"});
  std::vector<double> residuals;
  for (int n : c.consistency_atoms) {
    const double r = check_consistency(c.model, c.consistency_s, c.t, u.u, xs, n);
    residuals.push_back(r);
    table.add_row({static_cast<double>(n), r});
  }
  write_csv(c, "consistency.csv", table);
  bool decreasing = true;
  for (std::size_t k = 1; k < residuals.size(); ++k) decreasing = decreasing && residuals[k] < residuals[k - 1];
  json j = header(c, "consistency");
  j["s"] = c.consistency_s;
  j["atoms"] = c.consistency_atoms;
  j["residuals"] = residuals;
  j["decreasing"] = decreasing;
  if (c.timings) j["runtime_seconds"] = seconds_since(start);
  write_json(c, "consistency.json", j);
  log << "consistency: residual " << (residuals.empty() ? 0.0 : residuals.back()) << "\n";
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust semigroup experiments: dyadic iteration, Nisio bounds and HJB solves"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;

  using Command = std::function<int(const RunConfig&, std::ostream&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"iterate", "Dyadic and Nisio iteration levels", cmd_iterate},
      {"hjb", "Finite-difference solve of the limiting equation", cmd_hjb},
      {"compare", "Table of T, N, S, I and the HJB solution", cmd_compare},
      {"sensitivity", "Sensitivity bound and first-order expansions", cmd_sensitivity},
      {"consistency", "Chapman-Kolmogorov residuals of the reference model", cmd_consistency},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "TOML run configuration")->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("-s,--seed", seed, "Seed (overrides seed)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      Overrides ov;
      if (subs[i]->count("--out") > 0) ov.out = out_dir;
      if (subs[i]->count("--seed") > 0) ov.seed = seed;
      const RunConfig cfg = load_config(config_path, ov);
      return std::get<2>(commands[i])(cfg, err);
    } catch (const InvariantViolation& e) {
      err << "invariant violation: " << e.what() << "\n";
      return kInvariant;
    } catch (const NumericError& e) {
      err << "numeric failure: " << e.what() << "\n";
      return kNumeric;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace robsem::cli
