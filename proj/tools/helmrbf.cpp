// Command-line front end: solves, sweeps, convergence ladders, singular
// wavenumbers, flat-limit classification and the bundled reproduction recipes.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "helmrbf/errorest.hpp"
#include "helmrbf/experiment.hpp"
#include "helmrbf/flatlimit.hpp"
#include "helmrbf/singularity.hpp"

using namespace helmrbf;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

// Run-configuration flags shared by the solver subcommands. Values are kept as
// strings and applied on top of the config file, so flags always win.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app, std::initializer_list<const char*> keys) {
    app->add_option("--config", config_path, "key = value configuration file");
    for (const char* key : keys) {
      app->add_option(std::string("--") + key, values[key]);
    }
  }

  // Subcommands that choose eps themselves pass a placeholder so that
  // validation does not demand one.
  RunConfig resolve(CLI::App* app, std::optional<double> placeholder_eps = {}) const {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    for (const auto& [key, value] : values) {
      if (app->count("--" + key) > 0) cfg.set(key, value);
    }
    if (placeholder_eps && !cfg.eps && !cfg.c && !cfg.beta) cfg.eps = placeholder_eps;
    cfg.validate();
    return cfg;
  }
};

const std::initializer_list<const char*> kRunKeys = {
    "problem", "kappa", "kappa-im", "m", "xs", "width", "domain", "kernel", "eps", "c", "beta",
    "n1", "n2", "seed", "quad-tol", "grid", "out", "plot"};

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

void emit_plot(const std::string& path, const PlotSpec& plot) {
  if (!path.empty()) write_file_atomic(path, render_svg(plot));
}

SolveOptions solve_options() {
  SolveOptions so;
  so.exec = Exec::Parallel;
  return so;
}

int cmd_solve(const RunConfig& cfg) {
  const Problem prob = cfg.make_problem();
  const NodeSet nodes = cfg.make_nodes();
  const Kernel kernel = cfg.make_kernel(nodes.step());
  const Solution sol = solve(prob, nodes, kernel, solve_options());
  const EvalGrid grid = cfg.make_grid();
  const auto s = evaluate(sol.approx, grid.points);
  const auto r = residual(sol.approx, prob, grid.points);
  CsvTable t;
  t.header = {"x1", "x2", "re_s", "im_s", "abs_s", "re_r", "im_r"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add({format_number(grid.points[i][0]), format_number(grid.points[i][1]), format_number(s[i].real()),
           format_number(s[i].imag()), format_number(std::abs(s[i])), format_number(r[i].real()),
           format_number(r[i].imag())});
  }
  emit(cfg.out, t.str());
  std::ostream& log = cfg.out.empty() ? std::cerr : std::cout;
  log << "N = " << nodes.size() << ", eps = " << kernel.shape() << ", cond ~ " << sol.cond << "\n";
  if (sol.near_singular) log << "warning: system is near singular\n";
  if (!sol.quad_warning_rows.empty()) {
    log << "warning: " << sol.quad_warning_rows.size() << " rows with unconverged quadrature\n";
  }
  if (auto exact = analytic_solution(prob)) {
    log << "max error vs analytic solution: " << max_error(s, grid.points, *exact) << "\n";
  }
  return 0;
}

int cmd_estimate(const RunConfig& cfg) {
  const Problem prob = cfg.make_problem();
  const NodeSet nodes = cfg.make_nodes();
  const Kernel kernel = cfg.make_kernel(nodes.step());
  const Solution sol = solve(prob, nodes, kernel, solve_options());
  const EvalGrid grid = cfg.make_grid();
  ErrorReport rep = error_report(sol.approx, prob, grid);
  if (auto exact = analytic_solution(prob)) {
    rep.true_error = max_error(evaluate(sol.approx, grid.points), grid.points, *exact);
  }
  CsvTable t;
  t.header = {"eps", "estimate", "residual_l2", "residual_max", "true_error"};
  t.add({format_number(kernel.shape()), format_number(rep.estimate), format_number(rep.residual_l2),
         format_number(rep.residual_max), rep.true_error >= 0 ? format_number(rep.true_error) : "nan"});
  emit(cfg.out, t.str());
  return 0;
}

// Truth for sweeps: the analytic solution where one exists, otherwise a
// reference run on the given node set.
TruthFn make_truth(const RunConfig& cfg, const std::string& reference, std::shared_ptr<GridSolution>& keep) {
  const Problem prob = cfg.make_problem();
  const EvalGrid grid = cfg.make_grid();
  if (auto exact = analytic_solution(prob)) {
    auto pts = std::make_shared<std::vector<Point>>(grid.points);
    return [pts, f = *exact](const Approximant& a) { return max_error(evaluate(a, *pts), *pts, f); };
  }
  if (reference.empty()) return {};
  const auto ladder = parse_ladder(reference);
  if (ladder.size() != 1) throw ValidationError("reference", "expected a single n1xn2 size");
  RunConfig rc = cfg;
  rc.n1 = ladder[0].first;
  rc.n2 = ladder[0].second;
  const NodeSet nodes = rc.make_nodes();
  // The reference uses the sweep's strategy when it has one, else eps = 1.5 / sqrt(h).
  const double eps = rc.c ? rc.shape_for(nodes.step()) : eps_strategy(1.5, -0.5, nodes.step());
  const Solution sol = solve(prob, nodes, Kernel(parse_kernel_family(rc.kernel), eps), solve_options());
  keep = std::make_shared<GridSolution>(sample(prob, sol.approx, grid));
  auto ref = keep;
  return [ref, prob, grid](const Approximant& a) { return reference_compare(sample(prob, a, grid), *ref); };
}

CsvTable sweep_table(const std::vector<SweepRecord>& recs) {
  CsvTable t;
  t.header = {"eps", "N", "h", "true_error", "estimate", "residual_l2", "cond", "flags"};
  for (const auto& r : recs) {
    t.add({format_number(r.eps), std::to_string(r.n), format_number(r.h), format_number(r.true_error),
           format_number(r.estimate), format_number(r.residual_l2), format_number(r.cond),
           "\"" + r.flags + "\""});
  }
  return t;
}

int cmd_sweep(const RunConfig& cfg, const std::string& range, const std::string& reference) {
  const auto eps = parse_range(range);
  const Problem prob = cfg.make_problem();
  std::shared_ptr<GridSolution> keep;
  const TruthFn truth = make_truth(cfg, reference, keep);
  SweepOptions opt;
  opt.grid = cfg.grid1;
  const auto recs = sweep(prob, {cfg.make_nodes()}, parse_kernel_family(cfg.kernel), eps, truth, opt);
  emit(cfg.out, sweep_table(recs).str());
  const EpsSelection sel = select_epsilon(recs);
  std::ostream& log = cfg.out.empty() ? std::cerr : std::cout;
  log << "eps_est = " << sel.eps_est << ", eps_res = " << sel.eps_res;
  if (sel.eps_true > 0) log << ", eps_true = " << sel.eps_true;
  log << (sel.edge_warning ? " (minimum at the edge of the range)" : "") << "\n";
  if (!cfg.plot.empty()) {
    PlotSpec plot;
    plot.title = "Error indicators against eps";
    plot.xlabel = "eps";
    plot.ylabel = "value";
    PlotSeries e{"true error", {}, {}, true, true, false}, s{"estimate", {}, {}, true, true, false},
        r{"residual l2", {}, {}, true, true, true};
    for (const auto& rec : recs) {
      e.x.push_back(rec.eps);
      e.y.push_back(rec.true_error);
      s.x.push_back(rec.eps);
      s.y.push_back(rec.estimate);
      r.x.push_back(rec.eps);
      r.y.push_back(rec.residual_l2);
    }
    if (truth) plot.series.push_back(e);
    plot.series.push_back(s);
    plot.series.push_back(r);
    emit_plot(cfg.plot, plot);
  }
  return 0;
}

int cmd_converge(RunConfig cfg, const std::string& ladder_text) {
  if (!cfg.c || !cfg.beta) throw ValidationError("c", "converge needs the strategy c, beta instead of a fixed eps");
  const Problem prob = cfg.make_problem();
  std::vector<NodeSet> ladder;
  if (cfg.problem == "1d") {
    for (double n : parse_range(ladder_text)) {
      cfg.n1 = static_cast<int>(n);
      ladder.push_back(cfg.make_nodes());
    }
  } else {
    for (auto [n1, n2] : parse_ladder(ladder_text)) {
      cfg.n1 = n1;
      cfg.n2 = n2;
      ladder.push_back(cfg.make_nodes());
    }
  }
  if (ladder.size() < 3) throw ValidationError("ladder", "need at least 3 rungs");
  TruthFn truth;
  const EvalGrid grid = cfg.make_grid();
  if (auto exact = analytic_solution(prob)) {
    truth = [&grid, f = *exact](const Approximant& a) { return max_error(evaluate(a, grid.points), grid.points, f); };
  } else {
    // Reference: the finest rung.
    const NodeSet& fine = ladder.back();
    const Solution sol = solve(prob, fine, cfg.make_kernel(fine.step()), solve_options());
    auto ref = std::make_shared<GridSolution>(sample(prob, sol.approx, grid));
    truth = [ref, &prob, &grid](const Approximant& a) { return reference_compare(sample(prob, a, grid), *ref); };
  }
  SweepOptions opt;
  opt.grid = cfg.grid1;
  auto recs = converge(prob, ladder, parse_kernel_family(cfg.kernel), *cfg.c, *cfg.beta, truth, opt);
  if (!analytic_solution(prob)) {
    for (auto& r : recs) {
      if (r.n == ladder.back().size()) r.true_error = -1;
    }
  }
  emit(cfg.out, sweep_table(recs).str());
  std::ostream& log = cfg.out.empty() ? std::cerr : std::cout;
  const FitKind kind = cfg.problem == "1d" ? FitKind::InvH : FitKind::InvSqrtH;
  PlotSpec plot;
  plot.title = "Convergence, eps = " + format_number(*cfg.c) + " h^" + format_number(*cfg.beta);
  plot.xlabel = fit_kind_name(kind);
  plot.ylabel = "error";
  for (FitTarget target : {FitTarget::TrueError, FitTarget::Estimate}) {
    const std::string name = target == FitTarget::TrueError ? "error" : "estimate";
    PlotSeries pts{name, {}, {}, true, false, false};
    for (const auto& r : recs) {
      const double v = target == FitTarget::TrueError ? r.true_error : r.estimate;
      pts.x.push_back(fit_abscissa(kind, r.h));
      pts.y.push_back(v);
    }
    plot.series.push_back(pts);
    try {
      const FitResult f = fit_exponential(recs, kind, target);
      log << name << ": A_M = " << f.A_M << ", C_M = " << f.C_M << ", r2 = " << f.r2 << " (" << f.points_used
          << " points, f = " << fit_kind_name(kind) << ")\n";
      PlotSeries line{name + " fit", {}, {}, false, true, true};
      for (double x : pts.x) {
        line.x.push_back(x);
        line.y.push_back(f.A_M * std::exp(-f.C_M * x));
      }
      plot.series.push_back(line);
      plot.notes.push_back(name + " slope " + format_number(std::round(f.C_M * 100) / 100));
    } catch (const std::invalid_argument& e) {
      log << name << ": no fit (" << e.what() << ")\n";
    }
  }
  emit_plot(cfg.plot, plot);
  return 0;
}

int cmd_singular(const std::string& kernel, double eps, const std::string& nrange, const std::string& out) {
  if (!(eps > 0)) throw ValidationError("eps", "must be positive");
  const Kernel k(parse_kernel_family(kernel), eps);
  CsvTable t;
  t.header = {"N", "re", "im", "ppw"};
  for (double nv : parse_range(nrange)) {
    const int n = static_cast<int>(nv);
    if (n < 2) throw ValidationError("nrange", "node counts must be at least 2");
    const auto values = singular_wavenumbers(build_pencil(nodes_interval(n), k));
    for (const auto& z : values) {
      // Points per wavelength only has a meaning for Re k > 0.
      t.add({std::to_string(n), format_number(z.real()), format_number(z.imag()),
             has_positive_real_part(z, values) ? format_number(resolution_of(z, n)) : ""});
    }
  }
  emit(out, t.str());
  return 0;
}

NodeSet read_node_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ValidationError("nodes", "cannot read '" + path + "'");
  std::vector<Point> pts;
  std::vector<int> tags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("x1", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x1, x2;
    int tag;
    if (!(ss >> x1 >> x2 >> tag)) throw ValidationError("nodes", "line " + std::to_string(line_no) + " is not x1,x2,tag");
    pts.push_back({x1, x2});
    tags.push_back(tag);
  }
  return nodes_from_points(dim, std::move(pts), std::move(tags));
}

int cmd_limit(const std::string& problem, const std::string& nodes_path, const std::string& fixture,
              std::optional<double> kappa, double width) {
  if (problem != "1d" && problem != "rect") throw ValidationError("problem", "expected 1d | rect");
  if (nodes_path.empty() == fixture.empty()) throw ValidationError("nodes", "give exactly one of --nodes or --fixture");
  const int dim = problem == "1d" ? 1 : 2;
  NodeSet nodes;
  if (!fixture.empty()) {
    try {
      nodes = limit_fixture(fixture);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("fixture", e.what());
    }
    if (dim != 2) throw ValidationError("problem", "fixtures are rectangle node sets");
  } else {
    nodes = read_node_csv(nodes_path, dim);
  }
  const double k = kappa ? *kappa : (fixture == "example-iii" ? example_iii_kappa() : M_PI);
  if (!(k > 0)) throw ValidationError("kappa", "must be positive");
  const Problem prob = dim == 1 ? Problem::one_d(k) : Problem::rectangle(k, 1, width);
  const LimitReport rep = classify(prob, nodes);
  std::cout << "nodes: " << nodes.size() << "\n"
            << "kappa: " << format_number(k) << "\n"
            << "case: " << case_name(rep.limit_case) << (rep.indeterminate ? " (indeterminate)" : "") << "\n"
            << "rank P: " << rep.rank_P << "\n"
            << "rank Q: " << rep.rank_Q << "\n"
            << "m: " << rep.m << ", p: " << rep.p << ", M: " << rep.M << ", K: " << rep.K << "\n";
  auto print_null = [&](const char* name, const std::vector<std::vector<cplx>>& null) {
    for (const auto& v : null) {
      std::cout << name << " nullspace:";
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) < 1e-10) continue;
        std::cout << " " << format_number(v[j].real());
        if (std::abs(v[j].imag()) > 1e-12) std::cout << (v[j].imag() > 0 ? "+" : "") << format_number(v[j].imag()) << "i";
        std::cout << "*" << rep.basis.name(j);
      }
      std::cout << "\n";
    }
  };
  print_null("P", rep.nullspace_P);
  print_null("Q", rep.nullspace_Q);
  return 0;
}

int cmd_nodes(const RunConfig& cfg) {
  const NodeSet nodes = cfg.make_nodes();
  CsvTable t;
  t.header = {"x1", "x2", "tag"};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    t.add({format_number(nodes.points[i][0]), format_number(nodes.points[i][1]), std::to_string(nodes.region[i])});
  }
  emit(cfg.out, t.str());
  (cfg.out.empty() ? std::cerr : std::cout) << "N = " << nodes.size() << " (interior " << nodes.count(kInterior)
                                             << ")\n";
  return 0;
}

int cmd_reproduce(const std::string& name, const RecipeOptions& opt, const std::string& out, const std::string& plot) {
  const RecipeOutput res = run_recipe(name, opt);
  emit(out, res.table.str());
  std::ostream& log = out.empty() ? std::cerr : std::cout;
  for (const auto& line : res.summary) log << line << "\n";
  if (!plot.empty()) {
    if (!res.plot) throw ValidationError("plot", "recipe '" + name + "' has no plot");
    emit_plot(plot, *res.plot);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshfree RBF collocation solver for Helmholtz waveguide problems"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: HELMRBF_THREADS or all cores)");

  ConfigFlags solve_flags, estimate_flags, sweep_flags, converge_flags, nodes_flags;
  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write the solution on the grid");
  solve_flags.attach(solve_cmd, kRunKeys);
  auto* estimate_cmd = app.add_subcommand("estimate", "solve and report error estimate and residual norms");
  estimate_flags.attach(estimate_cmd, kRunKeys);

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep the shape parameter on one node set");
  sweep_flags.attach(sweep_cmd, kRunKeys);
  std::string eps_range = "3:0.3:9", reference;
  sweep_cmd->add_option("--eps-range", eps_range, "lo:step:hi or a comma separated list");
  sweep_cmd->add_option("--reference", reference, "n1xn2 reference node set when no closed form exists");

  auto* converge_cmd = app.add_subcommand("converge", "refinement ladder with eps = c h^beta");
  converge_flags.attach(converge_cmd, kRunKeys);
  std::string ladder = "10x12,14x17,18x22,22x27,26x32,30x37";
  converge_cmd->add_option("--ladder", ladder, "n1xn2 list (2D) or node counts (1D)");

  auto* singular_cmd = app.add_subcommand("singular", "wavenumbers that make the 1D system singular");
  std::string sing_kernel = "mq", nrange = "6:2:30", sing_out;
  double sing_eps = 5;
  singular_cmd->add_option("--kernel", sing_kernel);
  singular_cmd->add_option("--eps", sing_eps);
  singular_cmd->add_option("--nrange", nrange, "lo:step:hi");
  singular_cmd->add_option("--out", sing_out);

  auto* limit_cmd = app.add_subcommand("limit-classify", "classify the flat limit of a node set");
  std::string limit_problem = "rect", limit_nodes, limit_fixture_name;
  std::optional<double> limit_kappa;
  double limit_width = 1.0;
  limit_cmd->add_option("--problem", limit_problem, "1d | rect");
  limit_cmd->add_option("--nodes", limit_nodes, "CSV with columns x1,x2,tag");
  limit_cmd->add_option("--fixture", limit_fixture_name, "example-ii | example-iii | example-iv");
  limit_cmd->add_option("--kappa", limit_kappa);
  limit_cmd->add_option("--width", limit_width);

  auto* nodes_cmd = app.add_subcommand("nodes", "write a node set");
  nodes_flags.attach(nodes_cmd, kRunKeys);

  auto* reproduce_cmd = app.add_subcommand("reproduce", "run a bundled reproduction recipe");
  std::string recipe, rep_out, rep_plot;
  RecipeOptions rep_opt;
  reproduce_cmd->add_option("recipe", recipe, "table1 | table2 | table3 | table4 | fig2 | fig3 | fig5 | fig8")
      ->required();
  reproduce_cmd->add_option("--col", rep_opt.column, "table3 column (1-based), 0 for all");
  reproduce_cmd->add_option("--kernel", rep_opt.kernel);
  reproduce_cmd->add_option("--eps", rep_opt.eps);
  reproduce_cmd->add_option("--seeds", rep_opt.seeds, "node-set seeds to average over");
  reproduce_cmd->add_option("--out", rep_out);
  reproduce_cmd->add_option("--plot", rep_plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    if (*solve_cmd) return cmd_solve(solve_flags.resolve(solve_cmd));
    if (*estimate_cmd) return cmd_estimate(estimate_flags.resolve(estimate_cmd));
    if (*sweep_cmd) return cmd_sweep(sweep_flags.resolve(sweep_cmd, 1.0), eps_range, reference);
    if (*converge_cmd) {
      // The strategy has defaults here, so validation runs after they are filled in.
      RunConfig cfg;
      if (!converge_flags.config_path.empty()) cfg = load_config(converge_flags.config_path, cfg);
      for (const auto& [key, value] : converge_flags.values) {
        if (converge_cmd->count("--" + key) > 0) cfg.set(key, value);
      }
      if (!cfg.eps) {
        if (!cfg.c) cfg.c = 1.5;
        if (!cfg.beta) cfg.beta = -0.5;
      }
      cfg.validate();
      return cmd_converge(cfg, ladder);
    }
    if (*singular_cmd) return cmd_singular(sing_kernel, sing_eps, nrange, sing_out);
    if (*limit_cmd) return cmd_limit(limit_problem, limit_nodes, limit_fixture_name, limit_kappa, limit_width);
    if (*nodes_cmd) return cmd_nodes(nodes_flags.resolve(nodes_cmd, 1.0));
    if (*reproduce_cmd) return cmd_reproduce(recipe, rep_opt, rep_out, rep_plot);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
