#pragma once

#include <functional>
#include <string>
#include <vector>

#include "helmrbf/collocation.hpp"
#include "helmrbf/errorest.hpp"

namespace helmrbf {

struct SweepRecord {
  double eps = 0;
  double h = 0;
  std::size_t n = 0;
  double true_error = -1;  // negative when no truth is available
  double estimate = -1;
  double residual_l2 = -1;
  double cond = -1;
  bool failed = false;
  std::string flags;
};

// True error of a computed approximant, e.g. against an analytic or a
// reference solution on a fixed grid.
using TruthFn = std::function<double(const Approximant&)>;

struct SweepOptions {
  int grid = 60;              // evaluation grid for residual norms
  bool with_estimate = true;
  bool with_condition = true;
  Exec exec = Exec::Parallel;
};

SweepRecord solve_record(const Problem& problem, const NodeSet& nodes, KernelFamily family, double eps,
                         const TruthFn& truth, const SweepOptions& opt = {});

// One record per (eps, node set) pair; failures are recorded, not thrown.
std::vector<SweepRecord> sweep(const Problem& problem, const std::vector<NodeSet>& node_sets, KernelFamily family,
                               const std::vector<double>& eps_list, const TruthFn& truth,
                               const SweepOptions& opt = {});

struct EpsSelection {
  double eps_est = 0;
  double eps_res = 0;
  double eps_true = -1;  // argmin of the true error when available
  double c_tilde = 0;    // mean(eps_est, eps_res) * sqrt(h)
  bool edge_warning = false;
};
EpsSelection select_epsilon(const std::vector<SweepRecord>& records);

enum class FitKind { InvH, InvSqrtH };
std::string fit_kind_name(FitKind k);
double fit_abscissa(FitKind k, double h);

struct FitResult {
  double A_M = 0;
  double C_M = 0;
  FitKind kind = FitKind::InvH;
  double r2 = 0;
  int points_used = 0;
};

enum class FitTarget { TrueError, Estimate };

// log(err) = log(A_M) - C_M f(h). Records with cond > 1e16, failures and
// error spikes (> 10x growth under refinement) are skipped.
FitResult fit_exponential(const std::vector<SweepRecord>& records, FitKind kind,
                          FitTarget target = FitTarget::TrueError);

// eps = C h^beta.
double eps_strategy(double C, double beta, double h);

// 1D: 0.5 (k h)^(N-1). 2D: (k h)^K with K = floor(sqrt(2) sqrt(N + 1/8) - 1.5).
// Throws std::domain_error when k h >= 1.
double small_eps_model(ProblemKind kind, double kappa, double h, std::size_t n);

// 10^(-2 + 4q/9), q = 1..9.
std::vector<double> default_eps_grid_1d();
// lo, lo + step, ..., up to hi (inclusive within rounding).
std::vector<double> linear_grid(double lo, double step, double hi);

// eps = C h^beta on every rung of a refinement ladder.
std::vector<SweepRecord> converge(const Problem& problem, const std::vector<NodeSet>& ladder, KernelFamily family,
                                  double C, double beta, const TruthFn& truth, const SweepOptions& opt = {});

}  // namespace helmrbf
