#include "helmrbf/shapeconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "helmrbf/flatlimit.hpp"
#include "helmrbf/stats.hpp"

namespace helmrbf {

namespace {

double target_value(const SweepRecord& r, FitTarget t) {
  return t == FitTarget::TrueError ? r.true_error : r.estimate;
}

}  // namespace

SweepRecord solve_record(const Problem& problem, const NodeSet& nodes, KernelFamily family, double eps,
                         const TruthFn& truth, const SweepOptions& opt) {
  SweepRecord rec;
  rec.eps = eps;
  rec.h = nodes.step();
  rec.n = nodes.size();
  try {
    SolveOptions so;
    so.exec = opt.exec;
    so.estimate_condition = opt.with_condition;
    const Solution sol = solve(problem, nodes, Kernel(family, eps), so);
    if (opt.with_condition) rec.cond = sol.cond;
    if (sol.near_singular) rec.flags += "near-singular;";
    if (!sol.quad_warning_rows.empty()) rec.flags += "quadrature;";
    if (truth) rec.true_error = truth(sol.approx);
    const EvalGrid grid = eval_grid(problem.domain, opt.grid, opt.grid);
    if (opt.with_estimate) {
      const ErrorReport rep = error_report(sol.approx, problem, grid);
      rec.estimate = rep.estimate;
      rec.residual_l2 = rep.residual_l2;
    } else {
      rec.residual_l2 = residual_norms(sol.approx, problem, grid).l2;
    }
    const bool finite = std::isfinite(rec.residual_l2) && (!truth || std::isfinite(rec.true_error)) &&
                        (!opt.with_estimate || std::isfinite(rec.estimate));
    if (!finite) {
      rec.failed = true;
      rec.flags += "non-finite;";
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.flags += std::string("failed: ") + e.what() + ";";
  }
  return rec;
}

std::vector<SweepRecord> sweep(const Problem& problem, const std::vector<NodeSet>& node_sets, KernelFamily family,
                               const std::vector<double>& eps_list, const TruthFn& truth, const SweepOptions& opt) {
  if (node_sets.empty() || eps_list.empty()) throw std::invalid_argument("sweep: empty node-set or eps list");
  std::vector<SweepRecord> out;
  for (const auto& nodes : node_sets) {
    for (double eps : eps_list) out.push_back(solve_record(problem, nodes, family, eps, truth, opt));
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.n != b.n ? a.n < b.n : a.eps < b.eps;
  });
  return out;
}

EpsSelection select_epsilon(const std::vector<SweepRecord>& records) {
  if (records.size() < 3) throw std::invalid_argument("select_epsilon: need at least 3 records");
  std::vector<const SweepRecord*> ok;
  for (const auto& r : records) {
    if (!r.failed) ok.push_back(&r);
  }
  if (ok.empty()) throw std::invalid_argument("select_epsilon: every record failed");
  std::sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->eps < b->eps; });
  auto argmin = [&](auto key) {
    const SweepRecord* best = nullptr;
    for (auto* r : ok) {
      const double v = key(*r);
      if (v < 0 || !std::isfinite(v)) continue;
      if (!best || v < key(*best)) best = r;
    }
    return best;
  };
  const auto* est = argmin([](const SweepRecord& r) { return r.estimate; });
  const auto* res = argmin([](const SweepRecord& r) { return r.residual_l2; });
  const auto* tru = argmin([](const SweepRecord& r) { return r.true_error; });
  if (!res) throw std::invalid_argument("select_epsilon: no usable residual norms");
  EpsSelection sel;
  sel.eps_res = res->eps;
  sel.eps_est = est ? est->eps : res->eps;
  if (tru) sel.eps_true = tru->eps;
  sel.c_tilde = 0.5 * (sel.eps_est + sel.eps_res) * std::sqrt(res->h);
  const double lo = ok.front()->eps, hi = ok.back()->eps;
  sel.edge_warning = sel.eps_est == lo || sel.eps_est == hi || sel.eps_res == lo || sel.eps_res == hi;
  return sel;
}

std::string fit_kind_name(FitKind k) { return k == FitKind::InvH ? "1/h" : "1/sqrt(h)"; }

double fit_abscissa(FitKind k, double h) { return k == FitKind::InvH ? 1.0 / h : 1.0 / std::sqrt(h); }

FitResult fit_exponential(const std::vector<SweepRecord>& records, FitKind kind, FitTarget target) {
  std::vector<const SweepRecord*> rs;
  for (const auto& r : records) {
    const double v = target_value(r, target);
    if (r.failed || !(v > 0) || !std::isfinite(v)) continue;
    if (r.cond > 1e16) continue;
    rs.push_back(&r);
  }
  // Coarse to fine; drop spikes where refinement raises the error tenfold.
  std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->h > b->h; });
  std::vector<double> x, y;
  double last = -1;
  for (auto* r : rs) {
    const double v = target_value(*r, target);
    if (last > 0 && v > 10 * last) continue;
    last = v;
    x.push_back(fit_abscissa(kind, r->h));
    y.push_back(std::log(v));
  }
  if (x.size() < 3) throw std::invalid_argument("fit_exponential: fewer than 3 usable records");
  const LineFit f = fit_line(x, y);
  FitResult out;
  out.A_M = std::exp(f.intercept);
  out.C_M = -f.slope;
  out.kind = kind;
  out.r2 = f.r2;
  out.points_used = static_cast<int>(x.size());
  return out;
}

double eps_strategy(double C, double beta, double h) {
  if (!(C > 0)) throw std::invalid_argument("eps_strategy: C must be positive");
  if (!(h > 0)) throw std::invalid_argument("eps_strategy: h must be positive");
  return C * std::pow(h, beta);
}

double small_eps_model(ProblemKind kind, double kappa, double h, std::size_t n) {
  const double kh = kappa * h;
  if (!(kh < 1)) throw std::domain_error("small_eps_model: unresolved, kappa * h >= 1");
  if (kind == ProblemKind::OneD) return 0.5 * std::pow(kh, static_cast<double>(n) - 1);
  return std::pow(kh, degree_floor_formula(n));
}

std::vector<double> default_eps_grid_1d() {
  std::vector<double> g;
  for (int q = 1; q <= 9; ++q) g.push_back(std::pow(10.0, -2.0 + 4.0 * q / 9.0));
  return g;
}

std::vector<double> linear_grid(double lo, double step, double hi) {
  if (!(step > 0) || hi < lo) throw std::invalid_argument("linear_grid: need step > 0 and hi >= lo");
  std::vector<double> g;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) g.push_back(lo + i * step);
  return g;
}

std::vector<SweepRecord> converge(const Problem& problem, const std::vector<NodeSet>& ladder, KernelFamily family,
                                  double C, double beta, const TruthFn& truth, const SweepOptions& opt) {
  std::vector<SweepRecord> out;
  for (const auto& nodes : ladder) {
    out.push_back(solve_record(problem, nodes, family, eps_strategy(C, beta, nodes.step()), truth, opt));
  }
  return out;
}

}  // namespace helmrbf
