#include <algorithm>
#include <cmath>
#include <sstream>

#include "helmrbf/errorest.hpp"
#include "helmrbf/experiment.hpp"
#include "helmrbf/singularity.hpp"

namespace helmrbf {

namespace {

using Sizes = std::vector<std::pair<int, int>>;

const Sizes kNodeTable = {{10, 12}, {11, 14}, {12, 15}, {13, 16}, {14, 17}, {15, 19}, {16, 20},
                          {17, 21}, {18, 22}, {19, 24}, {20, 25}, {22, 27}, {24, 30}, {26, 32},
                          {28, 35}, {30, 37}, {32, 40}, {34, 42}, {36, 45}, {38, 47}, {40, 50}};
const Sizes kSelectionColumns = {{10, 12}, {11, 14}, {12, 15}, {13, 16}, {14, 17},
                                 {15, 19}, {16, 20}, {20, 25}, {30, 37}, {40, 50}};
const Sizes kConvergenceLadder = {{10, 12}, {14, 17}, {18, 22}, {22, 27}, {26, 32}, {30, 37}};

std::string fmt(double v) { return format_number(v); }

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

RecipeOutput table1(const RecipeOptions&) {
  RecipeOutput out;
  out.table.header = {"n1", "n2", "N", "interior", "boundary"};
  for (auto [n1, n2] : kNodeTable) {
    const NodeSet ns = nodes_waveguide(n1, n2, duct_m(), 1);
    const std::size_t interior = ns.count(kInterior);
    out.table.add({std::to_string(n1), std::to_string(n2), std::to_string(ns.size()), std::to_string(interior),
                   std::to_string(ns.size() - interior)});
  }
  return out;
}

// Average evaluations per DtN inner product at the inlet, and the relative
// change of the solution against a tight-tolerance solve.
RecipeOutput table2(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"eps", "tol", "avg_evals", "rel_change"};
  Problem prob = Problem::duct(6 * M_PI, duct_m());
  const NodeSet nodes = nodes_waveguide(30, 38, duct_m(), 1);
  const EvalGrid grid = eval_grid(prob.domain, 60, 60);
  const ModalBasis modes = ModalBasis::at(prob, 0.0, propagating_modes(prob.kappa, slice_at(prob.domain, 0).width()));
  const std::vector<double> tols = {1e-4, 1e-6, 1e-8, 1e-10};
  for (int e = 5; e <= 12; ++e) {
    const Kernel kernel(KernelFamily::Multiquadric, e);
    SolveOptions so;
    so.exec = opt.exec;
    so.estimate_condition = false;
    prob.quad_tol = 1e-14;
    const GridSolution tight = sample(prob, solve(prob, nodes, kernel, so).approx, grid);
    for (double tol : tols) {
      long evals = 0, count = 0;
      for (const auto& c : nodes.points) {
        for (int m = 1; m <= modes.mu; ++m) {
          auto g = [&](double x1) { return kernel.eval(std::hypot(x1 - c[0], -c[1])); };
          evals += inner_product_mode(g, m, modes.slice, tol).n_evals;
          ++count;
        }
      }
      prob.quad_tol = tol;
      double change = -1;
      try {
        change = reference_compare(sample(prob, solve(prob, nodes, kernel, so).approx, grid), tight);
      } catch (const std::runtime_error&) {
      }
      out.table.add({std::to_string(e), fmt(tol), fixed(static_cast<double>(evals) / count, 1), fmt(change)});
    }
  }
  return out;
}

RecipeOutput table3(const RecipeOptions& opt) {
  if (opt.column < 0 || opt.column > static_cast<int>(kSelectionColumns.size())) {
    throw ValidationError("col", "expected 1.." + std::to_string(kSelectionColumns.size()) + " or 0 for all");
  }
  RecipeOutput out;
  out.table.header = {"n1", "n2", "eps_true", "eps_est", "eps_res", "c_tilde", "edge_warning"};
  const Problem prob = Problem::duct(6 * M_PI, duct_m());
  const GridSolution reference = duct_reference(prob, 40, 50, 1.5, -0.5, 1, 60, opt.exec);
  SweepOptions so;
  so.exec = opt.exec;
  so.with_condition = false;
  for (std::size_t i = 0; i < kSelectionColumns.size(); ++i) {
    if (opt.column != 0 && static_cast<int>(i) + 1 != opt.column) continue;
    const auto [n1, n2] = kSelectionColumns[i];
    const bool is_reference = n1 == 40 && n2 == 50;
    const auto eps = n1 >= 20 ? linear_grid(3, 0.3, 15) : linear_grid(3, 0.3, 9);
    auto recs = duct_sweep_averaged(prob, n1, n2, eps, std::max(opt.seeds, 1), reference, so);
    if (is_reference) {
      for (auto& r : recs) r.true_error = -1;
    }
    const EpsSelection sel = select_epsilon(recs);
    out.table.add({std::to_string(n1), std::to_string(n2), sel.eps_true > 0 ? fixed(sel.eps_true, 1) : "nan",
                   fixed(sel.eps_est, 1), fixed(sel.eps_res, 1), fixed(sel.c_tilde, 2),
                   sel.edge_warning ? "1" : "0"});
    out.summary.push_back(std::to_string(n1) + "x" + std::to_string(n2) + ": eps* " +
                          (sel.eps_true > 0 ? fixed(sel.eps_true, 1) : "n/a") + ", eps_est " +
                          fixed(sel.eps_est, 1) + ", eps_res " + fixed(sel.eps_res, 1));
  }
  return out;
}

RecipeOutput table4(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"n1", "n2", "rel_error", "rel_estimate", "ratio", "adjusted", "local_slope"};
  const Problem prob = Problem::duct(12 * M_PI, duct_m());
  const Sizes ladder = {{20, 25}, {30, 37}, {40, 50}};
  const EvalGrid grid = eval_grid(prob.domain, 100, 100);
  std::vector<GridSolution> runs;
  std::vector<double> est, h;
  for (auto [n1, n2] : ladder) {
    const NodeSet ns = nodes_waveguide(n1, n2, duct_m(), 1);
    SolveOptions so;
    so.exec = opt.exec;
    so.estimate_condition = false;
    const Solution sol = solve(prob, ns, Kernel(KernelFamily::Multiquadric, eps_strategy(1.5, -0.5, ns.step())), so);
    runs.push_back(sample(prob, sol.approx, grid));
    est.push_back(estimate_duct(sol.approx, prob).estimate);
    h.push_back(ns.step());
  }
  double scale = 0;
  for (const auto& z : runs.back().values) scale = std::max(scale, std::abs(z));
  std::vector<LadderPoint> coarse;
  double projected = 0;
  for (std::size_t r = 0; r < ladder.size(); ++r) {
    const double rel_est = est[r] / scale;
    const bool finest = r + 1 == ladder.size();
    const double err = finest ? -1 : reference_compare(runs[r], runs.back());
    if (!finest) coarse.push_back({rel_est, err});
    const double adjusted = project_error(coarse, rel_est);
    if (finest) projected = adjusted;
    const double slope =
        r == 0 ? NAN : std::log(est[r - 1] / est[r]) / (1 / std::sqrt(h[r]) - 1 / std::sqrt(h[r - 1]));
    out.table.add({std::to_string(ladder[r].first), std::to_string(ladder[r].second), finest ? "nan" : fmt(err),
                   fmt(rel_est), finest ? "nan" : fixed(rel_est / err, 2), fmt(adjusted),
                   r == 0 ? "nan" : fixed(slope, 2)});
  }
  out.summary.push_back("projected relative error of the finest run: " + fmt(projected));
  return out;
}

RecipeOutput fig2(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"N", "re", "im", "ppw"};
  const Kernel kernel(parse_kernel_family(opt.kernel), opt.eps);
  double worst = 0;
  PlotSpec plot;
  plot.title = "Singular wavenumbers, " + opt.kernel + " eps = " + fixed(opt.eps, 2);
  plot.xlabel = "Re k";
  plot.ylabel = "N";
  plot.log_y = false;
  PlotSeries pts;
  pts.label = "Re k > 0";
  for (int n = 6; n <= 30; n += 2) {
    const auto values = singular_wavenumbers(build_pencil(nodes_interval(n), kernel));
    for (const auto& k : values) {
      const bool positive = has_positive_real_part(k, values);
      const double ppw = positive ? resolution_of(k, n) : 0.0;
      out.table.add({std::to_string(n), fmt(k.real()), fmt(k.imag()), positive ? fmt(ppw) : ""});
      if (positive) {
        worst = std::max(worst, ppw);
        pts.x.push_back(k.real());
        pts.y.push_back(n);
      }
    }
  }
  plot.series.push_back(pts);
  out.plot = plot;
  out.summary.push_back("largest points-per-wavelength among Re k > 0: " + fixed(worst, 3));
  return out;
}

RecipeOutput fig3(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"kappa", "N", "h", "error", "model"};
  const KernelFamily family = parse_kernel_family(opt.kernel);
  const double eps = 0.1;
  std::vector<Point> pts;
  for (int i = 0; i <= 200; ++i) pts.push_back({i / 200.0, 0});
  PlotSpec plot;
  plot.title = "Small-eps error against (k h)^(N-1) / 2";
  plot.xlabel = "N";
  plot.ylabel = "max error";
  for (int q : {1, 2, 4, 6}) {
    const double kappa = q * M_PI;
    const Problem prob = Problem::one_d(kappa);
    const auto exact = *analytic_solution(prob);
    PlotSeries err, model;
    err.label = "k = " + std::to_string(q) + " pi";
    model.label = "model, k = " + std::to_string(q) + " pi";
    model.markers = false;
    model.line = true;
    model.dashed = true;
    for (int n = 4; n <= 16; n += 2) {
      const NodeSet ns = nodes_interval(n);
      if (kappa * ns.step() >= 1) continue;
      const auto v = solve_evaluate_1d_extended(prob, ns, Kernel(family, eps), pts);
      const double e = max_error(v, pts, exact);
      const double m = small_eps_model(ProblemKind::OneD, kappa, ns.step(), ns.size());
      out.table.add({fmt(kappa), std::to_string(n), fmt(ns.step()), fmt(e), fmt(m)});
      err.x.push_back(n);
      err.y.push_back(e);
      model.x.push_back(n);
      model.y.push_back(m);
    }
    plot.series.push_back(err);
    plot.series.push_back(model);
  }
  out.plot = plot;
  return out;
}

RecipeOutput fig5(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"eps", "fit", "A_M", "C_M", "r2", "points"};
  const Problem prob = Problem::one_d(2 * M_PI);
  const auto exact = *analytic_solution(prob);
  std::vector<Point> pts;
  for (int i = 0; i <= 200; ++i) pts.push_back({i / 200.0, 0});
  TruthFn truth = [&](const Approximant& a) { return max_error(evaluate(a, pts), pts, exact); };
  std::vector<NodeSet> sets;
  for (int n = 10; n <= 60; n += 5) sets.push_back(nodes_interval(n));
  SweepOptions so;
  so.exec = opt.exec;
  so.with_estimate = false;
  PlotSpec plot;
  plot.title = "1D error against 1/h, MQ";
  plot.xlabel = "1/h";
  plot.ylabel = "max error";
  for (double eps : default_eps_grid_1d()) {
    const auto recs = sweep(prob, sets, KernelFamily::Multiquadric, {eps}, truth, so);
    PlotSeries s;
    s.label = "eps = " + fixed(eps, 3);
    s.line = true;
    for (const auto& r : recs) {
      if (r.failed) continue;
      s.x.push_back(1 / r.h);
      s.y.push_back(r.true_error);
    }
    plot.series.push_back(s);
    for (FitKind kind : {FitKind::InvH, FitKind::InvSqrtH}) {
      try {
        const FitResult f = fit_exponential(recs, kind);
        out.table.add({fmt(eps), fit_kind_name(kind), fmt(f.A_M), fmt(f.C_M), fmt(f.r2), std::to_string(f.points_used)});
      } catch (const std::invalid_argument&) {
        out.table.add({fmt(eps), fit_kind_name(kind), "nan", "nan", "nan", "0"});
      }
    }
  }
  out.plot = plot;
  return out;
}

RecipeOutput fig8(const RecipeOptions& opt) {
  RecipeOutput out;
  out.table.header = {"n1", "n2", "h", "inv_sqrt_h", "rel_error", "rel_estimate", "residual_l2"};
  const Problem prob = Problem::duct(6 * M_PI, duct_m());
  const LadderStudy st = duct_ladder_study(prob, kConvergenceLadder, 1.5, -0.5, std::max(opt.seeds, 1), 60, opt.exec);
  PlotSpec plot;
  plot.title = "Duct convergence, eps = 1.5 / sqrt(h)";
  plot.xlabel = "1/sqrt(h)";
  plot.ylabel = "relative error";
  PlotSeries err{"error vs finest", {}, {}, true, false, false};
  PlotSeries est{"estimate", {}, {}, true, false, false};
  PlotSeries ferr{"fit, error", {}, {}, false, true, true};
  PlotSeries fest{"fit, estimate", {}, {}, false, true, true};
  for (std::size_t r = 0; r < st.sizes.size(); ++r) {
    const double x = 1 / std::sqrt(st.h[r]);
    const bool coarse = r < st.error.size();
    out.table.add({std::to_string(st.sizes[r].first), std::to_string(st.sizes[r].second), fmt(st.h[r]), fmt(x),
                   coarse ? fmt(st.error[r]) : "nan", fmt(st.estimate[r]), fmt(st.residual_l2[r])});
    if (coarse) {
      err.x.push_back(x);
      err.y.push_back(st.error[r]);
      ferr.x.push_back(x);
      ferr.y.push_back(st.A_err * std::exp(-st.C_err * x));
    }
    est.x.push_back(x);
    est.y.push_back(st.estimate[r]);
    fest.x.push_back(x);
    fest.y.push_back(st.A_est * std::exp(-st.C_est * x));
  }
  plot.series = {err, est, ferr, fest};
  plot.notes = {"slope (error) " + fixed(st.C_err, 2) + ", r2 " + fixed(st.r2_err, 3),
                "slope (estimate) " + fixed(st.C_est, 2) + ", r2 " + fixed(st.r2_est, 3)};
  out.summary = plot.notes;
  out.plot = plot;
  return out;
}

}  // namespace

std::vector<std::string> recipe_names() {
  return {"table1", "table2", "table3", "table4", "fig2", "fig3", "fig5", "fig8"};
}

RecipeOutput run_recipe(const std::string& name, const RecipeOptions& options) {
  if (name == "table1") return table1(options);
  if (name == "table2") return table2(options);
  if (name == "table3") return table3(options);
  if (name == "table4") return table4(options);
  if (name == "fig2") return fig2(options);
  if (name == "fig3") return fig3(options);
  if (name == "fig5") return fig5(options);
  if (name == "fig8") return fig8(options);
  std::string known;
  for (const auto& n : recipe_names()) known += (known.empty() ? "" : " | ") + n;
  throw ValidationError("recipe", "unknown recipe '" + name + "' (expected " + known + ")");
}

}  // namespace helmrbf
