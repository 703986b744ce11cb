#include "helmrbf/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace helmrbf {

namespace {

constexpr cplx kI{0, 1};

bool is_straight(const Waveguide& w) {
  const double lo = w.lower(0), hi = w.upper(0);
  for (int i = 1; i <= 10; ++i) {
    const double x2 = i / 10.0;
    if (std::abs(w.lower(x2) - lo) > 1e-14 || std::abs(w.upper(x2) - hi) > 1e-14) return false;
  }
  return lo == 0.0;
}

void check_tags(const Problem& problem, const NodeSet& nodes) {
  if (nodes.dim != problem.dim()) throw std::invalid_argument("node set dimension does not match the problem");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int tag = nodes.region[i];
    if (tag < kInterior || tag > kWall || (problem.kind == ProblemKind::OneD && tag == kWall)) {
      throw std::invalid_argument("node " + std::to_string(i) + " has a tag not used by this problem");
    }
  }
}

void check_distinct(const NodeSet& nodes) {
  std::vector<Point> pts = nodes.points;
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] == pts[i - 1]) throw std::invalid_argument("node set contains duplicate points");
  }
}

// <phi_c(., x2), psi_m> for m = 1..mu.
std::vector<cplx> dtn_coefficients(const Kernel& kernel, const Point& center, const ModalBasis& modes,
                                   double tol, long& evals, bool& warn) {
  std::vector<cplx> c(static_cast<std::size_t>(modes.mu));
  const double dx2 = modes.x2 - center[1];
  auto g = [&](double x1) { return kernel.eval(std::hypot(x1 - center[0], dx2)); };
  for (int m = 1; m <= modes.mu; ++m) {
    const auto q = inner_product_mode(g, m, modes.slice, tol);
    c[m - 1] = q.value;
    evals += q.n_evals;
    if (!q.converged) warn = true;
  }
  return c;
}

cplx dtn_entry(const Operator& op, const KernelJet2D& jet, const Point& point, std::span<const cplx> coef) {
  cplx sum = 0;
  for (int m = 1; m <= op.modes->mu; ++m) {
    sum += op.modes->beta[m - 1] * coef[m - 1] * op.modes->psi(m, point[0]);
  }
  return op.sign * jet.dx2 - kI * sum;
}

std::array<cplx, 3> symmetric_coefficients(const Problem& problem, int region) {
  const cplx k = problem.kappa;
  switch (region) {
    case kInterior:
      return {-k * k, 0.0, -1.0};
    case kLeft:
      return {-kI * k, -1.0, 0.0};
    case kRight:
      return {-kI * k, 1.0, 0.0};
    default:
      throw std::invalid_argument("symmetric collocation: unsupported region tag");
  }
}

}  // namespace

Problem Problem::one_d(cplx kappa) {
  Problem p;
  p.kind = ProblemKind::OneD;
  p.kappa = kappa;
  p.domain = Interval{};
  return p;
}

Problem Problem::rectangle(cplx kappa, int mode, double width) {
  Problem p;
  p.kind = ProblemKind::Rectangle;
  p.kappa = kappa;
  p.mode = mode;
  p.domain = Rectangle{width};
  return p;
}

Problem Problem::duct(cplx kappa, Waveguide guide, double xs) {
  Problem p;
  p.kind = ProblemKind::Duct;
  p.kappa = kappa;
  p.xs = xs;
  p.domain = std::move(guide);
  return p;
}

void Problem::validate() const {
  if (!std::isfinite(kappa.real()) || !std::isfinite(kappa.imag()) || !(kappa.real() > 0)) {
    throw std::invalid_argument("kappa: real part must be positive and finite");
  }
  if (!(quad_tol > 0)) throw std::invalid_argument("quad_tol: must be positive");
  switch (kind) {
    case ProblemKind::OneD:
      if (!std::holds_alternative<Interval>(domain)) throw std::invalid_argument("domain: 1D problem needs an interval");
      break;
    case ProblemKind::Rectangle: {
      const auto* r = std::get_if<Rectangle>(&domain);
      if (!r || !(r->width > 0)) throw std::invalid_argument("domain: rectangle needs a positive width");
      if (mode < 1) throw std::invalid_argument("m: mode index must be >= 1");
      const cplx beta = axial_wavenumber(kappa, mode * M_PI / r->width);
      if (std::abs(beta) < 1e-12 * std::abs(kappa)) {
        throw std::invalid_argument("m: kappa coincides with a cut-off, beta_m = 0");
      }
      break;
    }
    case ProblemKind::Duct: {
      const auto* w = std::get_if<Waveguide>(&domain);
      if (!w) throw std::invalid_argument("domain: duct problem needs a waveguide");
      if (!(xs > w->lower(0) && xs < w->upper(0))) {
        throw std::invalid_argument("xs: source must lie inside the inlet cross-section");
      }
      break;
    }
  }
}

cplx axial_wavenumber(cplx kappa, double alpha) {
  cplx b = std::sqrt(kappa * kappa - alpha * alpha);
  if (b.imag() < 0) b = -b;
  return b;
}

int propagating_modes(cplx kappa, double width) {
  return static_cast<int>(std::floor(kappa.real() * width / M_PI));
}

ModalBasis ModalBasis::at(const Problem& problem, double x2, int n_modes) {
  ModalBasis b;
  b.x2 = x2;
  b.slice = slice_at(problem.domain, x2);
  b.mu = propagating_modes(problem.kappa, b.slice.width());
  for (int m = 1; m <= n_modes; ++m) {
    b.alpha.push_back(m * M_PI / b.slice.width());
    b.beta.push_back(axial_wavenumber(problem.kappa, b.alpha.back()));
  }
  return b;
}

Operator operator_for(const Problem& problem, int region, const ModalBasis* modes) {
  Operator op;
  op.quad_tol = problem.quad_tol;
  if (region == kInterior) return op;
  if (region == kWall) {
    if (problem.kind == ProblemKind::OneD) throw std::invalid_argument("1D problem has no wall nodes");
    op.kind = OperatorKind::Dirichlet;
    return op;
  }
  if (region != kLeft && region != kRight) throw std::invalid_argument("unknown region tag");
  op.sign = region == kLeft ? -1.0 : 1.0;
  switch (problem.kind) {
    case ProblemKind::OneD:
      op.kind = OperatorKind::Robin;
      op.beta = problem.kappa;
      break;
    case ProblemKind::Rectangle:
      op.kind = OperatorKind::Robin;
      op.beta = axial_wavenumber(problem.kappa, problem.mode * M_PI / std::get<Rectangle>(problem.domain).width);
      break;
    case ProblemKind::Duct:
      if (!modes) throw std::invalid_argument("DtN operator needs a modal basis");
      op.kind = OperatorKind::DtN;
      op.modes = modes;
      break;
  }
  return op;
}

cplx rhs_value(const Problem& problem, int region, const Point& p) {
  if (region != kLeft) return 0.0;
  switch (problem.kind) {
    case ProblemKind::OneD:
      return -2.0 * kI * problem.kappa;
    case ProblemKind::Rectangle: {
      const double alpha = problem.mode * M_PI / std::get<Rectangle>(problem.domain).width;
      return -2.0 * kI * axial_wavenumber(problem.kappa, alpha) * std::sin(alpha * p[0]);
    }
    case ProblemKind::Duct: {
      const Slice s = slice_at(problem.domain, 0.0);
      const int mu = propagating_modes(problem.kappa, s.width());
      cplx sum = 0;
      for (int m = 1; m <= mu; ++m) {
        const double amp = mode_shape(s, m, problem.xs);
        sum += amp * axial_wavenumber(problem.kappa, m * M_PI / s.width()) * mode_shape(s, m, p[0]);
      }
      return -2.0 * kI * sum;
    }
  }
  return 0.0;
}

cplx apply_operator(const Operator& op, const Problem& problem, const Kernel& kernel, const Point& center,
                    const Point& point, bool* warn) {
  const cplx k2 = problem.kappa * problem.kappa;
  if (problem.kind == ProblemKind::OneD) {
    const auto d = kernel.derivatives_1d(point[0] - center[0]);
    switch (op.kind) {
      case OperatorKind::Helmholtz:
        return -d[2] - k2 * d[0];
      case OperatorKind::Robin:
        return op.sign * d[1] - kI * op.beta * d[0];
      case OperatorKind::Dirichlet:
        return d[0];
      case OperatorKind::DtN:
        throw std::invalid_argument("DtN operator is not defined in 1D");
    }
  }
  const KernelJet2D jet = jet_2d(kernel, point[0] - center[0], point[1] - center[1]);
  switch (op.kind) {
    case OperatorKind::Helmholtz:
      return -jet.laplacian - k2 * jet.value;
    case OperatorKind::Robin:
      return op.sign * jet.dx2 - kI * op.beta * jet.value;
    case OperatorKind::Dirichlet:
      return jet.value;
    case OperatorKind::DtN: {
      long evals = 0;
      bool w = false;
      const auto coef = dtn_coefficients(kernel, center, *op.modes, op.quad_tol, evals, w);
      if (warn && w) *warn = true;
      return dtn_entry(op, jet, point, coef);
    }
  }
  return 0.0;
}

Assembly assemble_nonsymmetric(const Problem& problem, const NodeSet& nodes, const Kernel& kernel, Exec exec) {
  problem.validate();
  check_tags(problem, nodes);
  check_distinct(nodes);
  const std::size_t n = nodes.size();
  Assembly out;
  out.matrix = CMatrix(n, n);
  out.rhs.resize(n);

  // One modal basis per DtN station.
  std::vector<ModalBasis> stations;
  std::vector<int> station_of(n, -1);
  if (problem.kind == ProblemKind::Duct) {
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes.region[i] != kLeft && nodes.region[i] != kRight) continue;
      const double x2 = nodes.points[i][1];
      auto it = std::find_if(stations.begin(), stations.end(), [&](const ModalBasis& b) { return b.x2 == x2; });
      if (it == stations.end()) {
        const int mu = propagating_modes(problem.kappa, slice_at(problem.domain, x2).width());
        stations.push_back(ModalBasis::at(problem, x2, mu));
        it = stations.end() - 1;
      }
      station_of[i] = static_cast<int>(it - stations.begin());
    }
  }
  std::vector<Operator> ops(n);
  for (std::size_t i = 0; i < n; ++i) {
    ops[i] = operator_for(problem, nodes.region[i], station_of[i] >= 0 ? &stations[station_of[i]] : nullptr);
    out.rhs[i] = rhs_value(problem, nodes.region[i], nodes.points[i]);
  }

  std::vector<char> row_warn(n, 0);
  long evals = 0;
  const auto nn = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (ops[i].kind == OperatorKind::DtN) {
          bool w = false;
          const auto coef = dtn_coefficients(kernel, nodes.points[j], *ops[i].modes, problem.quad_tol, evals, w);
          if (w) row_warn[i] = 1;
          const auto jet = jet_2d(kernel, nodes.points[i][0] - nodes.points[j][0],
                                  nodes.points[i][1] - nodes.points[j][1]);
          out.matrix(i, j) = dtn_entry(ops[i], jet, nodes.points[i], coef);
        } else {
          out.matrix(i, j) = apply_operator(ops[i], problem, kernel, nodes.points[j], nodes.points[i]);
        }
      }
    }
  } else {
    // cache[s][j] holds the inner products of kernel j with the modes at station s.
    std::vector<std::vector<std::vector<cplx>>> cache(stations.size(), std::vector<std::vector<cplx>>(n));
    std::vector<std::vector<char>> cache_warn(stations.size(), std::vector<char>(n, 0));
    for (std::size_t s = 0; s < stations.size(); ++s) {
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : evals)
      for (std::ptrdiff_t jj = 0; jj < nn; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        bool w = false;
        long e = 0;
        cache[s][j] = dtn_coefficients(kernel, nodes.points[j], stations[s], problem.quad_tol, e, w);
        cache_warn[s][j] = w;
        evals += e;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (station_of[i] < 0) continue;
      const auto& cw = cache_warn[station_of[i]];
      if (std::any_of(cw.begin(), cw.end(), [](char c) { return c != 0; })) row_warn[i] = 1;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < nn; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      for (std::size_t i = 0; i < n; ++i) {
        if (ops[i].kind == OperatorKind::DtN) {
          const auto jet = jet_2d(kernel, nodes.points[i][0] - nodes.points[j][0],
                                  nodes.points[i][1] - nodes.points[j][1]);
          out.matrix(i, j) = dtn_entry(ops[i], jet, nodes.points[i], cache[station_of[i]][j]);
        } else {
          out.matrix(i, j) = apply_operator(ops[i], problem, kernel, nodes.points[j], nodes.points[i]);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row_warn[i]) out.quad_warning_rows.push_back(i);
  }
  out.quad_evals = evals;
  return out;
}

Assembly assemble_symmetric_1d(const Problem& problem, const NodeSet& nodes, const Kernel& kernel) {
  if (problem.kind != ProblemKind::OneD) throw std::invalid_argument("symmetric collocation is 1D only");
  problem.validate();
  check_tags(problem, nodes);
  check_distinct(nodes);
  const std::size_t n = nodes.size();
  Assembly out;
  out.matrix = CMatrix(n, n);
  out.rhs.resize(n);
  out.column_ops.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.column_ops[i] = symmetric_coefficients(problem, nodes.region[i]);
    out.rhs[i] = rhs_value(problem, nodes.region[i], nodes.points[i]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ck = out.column_ops[k];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cj = out.column_ops[j];
      const auto d = kernel.derivatives_1d(nodes.points[j][0] - nodes.points[k][0]);
      cplx sum = 0;
      for (int a = 0; a < 3; ++a) {
        if (cj[a] == cplx(0)) continue;
        for (int b = 0; b < 3; ++b) {
          if (ck[b] == cplx(0)) continue;
          sum += cj[a] * std::conj(ck[b]) * (b % 2 ? -1.0 : 1.0) * d[a + b];
        }
      }
      out.matrix(j, k) = sum;
    }
  }
  return out;
}

Approximant::Jet Approximant::jet(const Point& x) const {
  Jet out;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const cplx lam = lambda[k];
    if (dim == 1) {
      const auto d = kernel.derivatives_1d(x[0] - centers[k][0]);
      if (column_ops.empty()) {
        out.value += lam * d[0];
        out.d1 += lam * d[1];
        out.lap += lam * d[2];
      } else {
        const auto& c = column_ops[k];
        cplx b0 = 0, b1 = 0, b2 = 0;
        for (int b = 0; b < 3; ++b) {
          const cplx w = std::conj(c[b]) * (b % 2 ? -1.0 : 1.0);
          b0 += w * d[b];
          b1 += w * d[b + 1];
          b2 += w * d[b + 2];
        }
        out.value += lam * b0;
        out.d1 += lam * b1;
        out.lap += lam * b2;
      }
    } else {
      const auto j = jet_2d(kernel, x[0] - centers[k][0], x[1] - centers[k][1]);
      out.value += lam * j.value;
      out.d1 += lam * j.dx1;
      out.d2 += lam * j.dx2;
      out.lap += lam * j.laplacian;
    }
  }
  if (dim == 1) out.d2 = out.lap;
  return out;
}

Solution solve(const Problem& problem, const NodeSet& nodes, const Kernel& kernel, const SolveOptions& options) {
  const Assembly sys = options.scheme == Scheme::Symmetric ? assemble_symmetric_1d(problem, nodes, kernel)
                                                           : assemble_nonsymmetric(problem, nodes, kernel, options.exec);
  const LUFactors lu = lu_factor(sys.matrix, options.exec);
  Solution sol;
  sol.approx.kernel = kernel;
  sol.approx.dim = nodes.dim;
  sol.approx.centers = nodes.points;
  sol.approx.lambda = lu.solve(sys.rhs);
  sol.approx.column_ops = sys.column_ops;
  sol.growth_flag = lu.growth_flag();
  sol.quad_warning_rows = sys.quad_warning_rows;
  if (options.estimate_condition) {
    sol.cond = cond_estimate(sys.matrix, lu);
    sol.near_singular = sol.cond > 1e17;
  } else {
    sol.cond = std::nan("");
  }
  return sol;
}

std::vector<cplx> evaluate(const Approximant& approx, std::span<const Point> points, Exec exec) {
  std::vector<cplx> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = approx.value(points[i]);
  return out;
}

cplx residual_at(const Approximant& approx, const Problem& problem, const Point& x) {
  const auto j = approx.jet(x);
  return -j.lap - problem.kappa * problem.kappa * j.value;
}

std::vector<cplx> residual(const Approximant& approx, const Problem& problem, std::span<const Point> points,
                           Exec exec) {
  std::vector<cplx> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = residual_at(approx, problem, points[i]);
  return out;
}

std::optional<std::function<cplx(const Point&)>> analytic_solution(const Problem& problem) {
  const cplx k = problem.kappa;
  switch (problem.kind) {
    case ProblemKind::OneD:
      return [k](const Point& p) { return std::exp(kI * k * p[0]); };
    case ProblemKind::Rectangle: {
      const double alpha = problem.mode * M_PI / std::get<Rectangle>(problem.domain).width;
      const cplx beta = axial_wavenumber(k, alpha);
      return [alpha, beta](const Point& p) { return std::exp(kI * beta * p[1]) * std::sin(alpha * p[0]); };
    }
    case ProblemKind::Duct: {
      const auto& w = std::get<Waveguide>(problem.domain);
      if (!is_straight(w)) return std::nullopt;
      const Slice s{w.lower(0), w.upper(0)};
      const int mu = propagating_modes(k, s.width());
      std::vector<cplx> amp_beta;
      for (int m = 1; m <= mu; ++m) amp_beta.push_back(axial_wavenumber(k, m * M_PI / s.width()));
      const double xs = problem.xs;
      return [s, mu, amp_beta, xs](const Point& p) {
        cplx u = 0;
        for (int m = 1; m <= mu; ++m) {
          u += mode_shape(s, m, xs) * std::exp(kI * amp_beta[m - 1] * p[1]) * mode_shape(s, m, p[0]);
        }
        return u;
      };
    }
  }
  return std::nullopt;
}

double max_error(std::span<const cplx> values, std::span<const Point> points,
                 const std::function<cplx(const Point&)>& exact) {
  if (values.size() != points.size()) throw std::invalid_argument("max_error: size mismatch");
  double e = 0;
  for (std::size_t i = 0; i < values.size(); ++i) e = std::max(e, std::abs(values[i] - exact(points[i])));
  return e;
}

}  // namespace helmrbf
