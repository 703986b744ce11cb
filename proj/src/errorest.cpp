#include "helmrbf/errorest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <valarray>

#include "helmrbf/quadrature.hpp"

namespace helmrbf {

namespace {

// Per-station evaluation cap; smooth residuals converge far below it.
constexpr long kStationBudget = 50000;

double station_x2(int k, int stations) { return k == stations - 1 ? 1.0 : static_cast<double>(k) / (stations - 1); }

// max |r| over a coarse sample, used to scale the quadrature tolerance.
double residual_scale(const ResidualFn& r, const Domain& domain) {
  const EvalGrid g = eval_grid(domain, 21, 21);
  double m = 0;
  for (const auto& p : g.points) m = std::max(m, std::abs(r(p)));
  return m;
}

ModalEstimate modal_estimate(const ResidualFn& r, const Problem& problem, const ModalOptions& opt) {
  if (opt.stations < 2) throw std::invalid_argument("stations: need at least 2");
  const int ns = opt.stations;
  std::vector<ModalBasis> bases;
  int mu_max = 0;
  for (int k = 0; k < ns; ++k) {
    const double x2 = station_x2(k, ns);
    mu_max = std::max(mu_max, propagating_modes(problem.kappa, slice_at(problem.domain, x2).width()));
  }
  const int n_modes = opt.n_modes > 0 ? opt.n_modes : 2 * mu_max + 10;
  if (n_modes < mu_max + 1) throw std::invalid_argument("n_modes: must exceed the number of propagating modes");
  for (int k = 0; k < ns; ++k) bases.push_back(ModalBasis::at(problem, station_x2(k, ns), n_modes));

  ModalEstimate out;
  out.mode_breakdown.assign(static_cast<std::size_t>(n_modes), 0.0);
  const double scale = residual_scale(r, problem.domain);
  if (scale == 0) return out;
  const double tol = opt.rel_tol * scale;

  // weighted[k][m-1] = weight_m(x2_k) * |r_m(x2_k)|
  std::vector<std::vector<double>> weighted(ns, std::vector<double>(n_modes));
  long evals = 0;
  bool converged = true;
#pragma omp parallel for schedule(dynamic) reduction(+ : evals) reduction(&& : converged)
  for (int k = 0; k < ns; ++k) {
    const ModalBasis& b = bases[k];
    const double x2 = b.x2;
    auto f = [&](double x1) {
      std::valarray<cplx> v(static_cast<std::size_t>(n_modes));
      const cplx rv = r({x1, x2});
      for (int m = 1; m <= n_modes; ++m) v[m - 1] = rv * b.psi(m, x1);
      return v;
    };
    const auto q = integrate(f, b.slice.lo, b.slice.hi, tol, kStationBudget);
    evals += q.n_evals;
    converged = converged && q.converged;
    const double psi_max = std::sqrt(2.0 / b.slice.width());
    for (int m = 1; m <= n_modes; ++m) {
      const cplx beta = b.beta[m - 1];
      const double rm = std::abs(q.value[m - 1]);
      double w;
      if (beta.real() > 0 && m <= b.mu) {
        w = psi_max / (2.0 * beta.real());
      } else {
        const double ab = std::abs(beta);
        w = psi_max * (1.0 - std::exp(-ab / 2.0)) / (ab * ab);
      }
      weighted[k][m - 1] = w * rm;
    }
  }
  const double h = 1.0 / (ns - 1);
  for (int m = 0; m < n_modes; ++m) {
    double s = 0;
    for (int k = 0; k < ns; ++k) s += (k == 0 || k == ns - 1 ? 0.5 : 1.0) * weighted[k][m];
    out.mode_breakdown[m] = s * h;
    out.estimate += out.mode_breakdown[m];
  }
  out.n_evals = evals;
  out.converged = converged;
  return out;
}

ResidualFn residual_fn(const Approximant& approx, const Problem& problem) {
  return [&approx, &problem](const Point& p) { return residual_at(approx, problem, p); };
}

}  // namespace

double estimate_1d(const ResidualFn& r, double kappa, std::vector<double> breaks) {
  if (!(kappa > 0)) throw std::invalid_argument("estimate_1d: kappa must be positive");
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double x) { return x < 0 || x > 1; }), breaks.end());
  double scale = 0;
  for (int i = 0; i <= 200; ++i) scale = std::max(scale, std::abs(r({i / 200.0, 0.0})));
  if (scale == 0) return 0.0;
  const double tol = 1e-10 * scale / static_cast<double>(breaks.size());
  // A smooth gap needs a few hundred evaluations; a budget well above that
  // keeps rounding-noise residuals from refining without end.
  constexpr long kGapBudget = 20000;
  double total = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += integrate([&](double x) { return std::abs(r({x, 0.0})); }, breaks[i], breaks[i + 1], tol, kGapBudget)
                 .value;
  }
  return total / (2.0 * kappa);
}

double estimate_1d(const Approximant& approx, const Problem& problem) {
  if (problem.kind != ProblemKind::OneD) throw std::invalid_argument("estimate_1d: 1D problem required");
  std::vector<double> breaks;
  for (const auto& c : approx.centers) breaks.push_back(c[0]);
  return estimate_1d(residual_fn(approx, problem), problem.kappa.real(), breaks);
}

ModalEstimate estimate_rect(const ResidualFn& r, const Problem& problem, const ModalOptions& opt) {
  if (problem.kind != ProblemKind::Rectangle) throw std::invalid_argument("estimate_rect: rectangle problem required");
  return modal_estimate(r, problem, opt);
}

ModalEstimate estimate_rect(const Approximant& approx, const Problem& problem, const ModalOptions& opt) {
  return estimate_rect(residual_fn(approx, problem), problem, opt);
}

ModalEstimate estimate_duct(const ResidualFn& r, const Problem& problem, const ModalOptions& opt) {
  if (problem.kind != ProblemKind::Duct) throw std::invalid_argument("estimate_duct: duct problem required");
  return modal_estimate(r, problem, opt);
}

ModalEstimate estimate_duct(const Approximant& approx, const Problem& problem, const ModalOptions& opt) {
  return estimate_duct(residual_fn(approx, problem), problem, opt);
}

ResidualNorms residual_norms(std::span<const cplx> values) {
  ResidualNorms n;
  if (values.empty()) return n;
  double s = 0;
  for (const auto& v : values) {
    s += std::norm(v);
    n.max = std::max(n.max, std::abs(v));
  }
  n.l2 = std::sqrt(s / static_cast<double>(values.size()));
  return n;
}

ResidualNorms residual_norms(const Approximant& approx, const Problem& problem, const EvalGrid& grid) {
  const auto pts = grid.interior_points();
  const auto r = residual(approx, problem, pts);
  return residual_norms(r);
}

ErrorReport error_report(const Approximant& approx, const Problem& problem, const EvalGrid& grid) {
  ErrorReport rep;
  switch (problem.kind) {
    case ProblemKind::OneD:
      rep.estimate = estimate_1d(approx, problem);
      break;
    case ProblemKind::Rectangle: {
      auto m = estimate_rect(approx, problem);
      rep.estimate = m.estimate;
      rep.mode_breakdown = std::move(m.mode_breakdown);
      break;
    }
    case ProblemKind::Duct: {
      auto m = estimate_duct(approx, problem);
      rep.estimate = m.estimate;
      rep.mode_breakdown = std::move(m.mode_breakdown);
      break;
    }
  }
  const auto n = residual_norms(approx, problem, grid);
  rep.residual_l2 = n.l2;
  rep.residual_max = n.max;
  return rep;
}

}  // namespace helmrbf
