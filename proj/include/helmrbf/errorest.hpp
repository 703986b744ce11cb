#pragma once

#include <functional>
#include <span>
#include <vector>

#include "helmrbf/collocation.hpp"

namespace helmrbf {

using ResidualFn = std::function<cplx(const Point&)>;

// (1 / 2k) * int_0^1 |r(x)| dx, integrated piecewise between the breakpoints
// (typically the collocation nodes, where r vanishes).
double estimate_1d(const ResidualFn& r, double kappa, std::vector<double> breaks = {});
double estimate_1d(const Approximant& approx, const Problem& problem);

struct ModalEstimate {
  double estimate = 0;
  std::vector<double> mode_breakdown;  // contribution of modes 1..n_modes
  long n_evals = 0;
  bool converged = true;
};

struct ModalOptions {
  int n_modes = 0;       // 0 selects 2 * mu_max + 10
  int stations = 60;     // uniform x2 stations, trapezoid rule in x2
  double rel_tol = 1e-6; // quadrature tolerance relative to max |r|
};

// Modal bound for the rectangle: propagating modes weigh
// |psi_m|_max / (2 beta_m), evanescent ones |psi_m|_max (1 - exp(-|beta_m|/2)) / |beta_m|^2.
ModalEstimate estimate_rect(const ResidualFn& r, const Problem& problem, const ModalOptions& opt = {});
ModalEstimate estimate_rect(const Approximant& approx, const Problem& problem, const ModalOptions& opt = {});

// Same weights with station-dependent widths and wavenumbers; each mode is
// counted as propagating at the stations where Re beta_m(x2) > 0.
ModalEstimate estimate_duct(const ResidualFn& r, const Problem& problem, const ModalOptions& opt = {});
ModalEstimate estimate_duct(const Approximant& approx, const Problem& problem, const ModalOptions& opt = {});

struct ResidualNorms {
  double l2 = 0;   // root mean square
  double max = 0;
};
ResidualNorms residual_norms(std::span<const cplx> values);
ResidualNorms residual_norms(const Approximant& approx, const Problem& problem, const EvalGrid& grid);

struct ErrorReport {
  double estimate = 0;
  double residual_l2 = 0;
  double residual_max = 0;
  double true_error = -1;  // negative when unknown
  std::vector<double> mode_breakdown;
};

// Estimate matching the problem kind plus residual norms on the interior grid.
ErrorReport error_report(const Approximant& approx, const Problem& problem, const EvalGrid& grid);

}  // namespace helmrbf
