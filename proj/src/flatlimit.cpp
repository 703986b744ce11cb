#include "helmrbf/flatlimit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helmrbf/stats.hpp"

namespace helmrbf {

namespace {

constexpr cplx kI{0, 1};

double pw(double x, int e) { return e < 0 ? 0.0 : std::pow(x, e); }

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  return Eigen::Map<const Eigen::MatrixXcd>(m.data(), static_cast<Eigen::Index>(m.rows()),
                                            static_cast<Eigen::Index>(m.cols()));
}

int rank_of(const Eigen::MatrixXcd& m, std::size_t n_nodes) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  const double tol = 1e-10 * static_cast<double>(n_nodes) * s(0);
  return static_cast<int>((s.array() > tol).count());
}

}  // namespace

std::size_t poly_dim(int K, int d) {
  if (K < 0 || d < 1) throw std::invalid_argument("poly_dim: need K >= 0 and d >= 1");
  std::size_t c = 1;
  for (int i = 1; i <= d; ++i) c = c * static_cast<std::size_t>(K + i) / static_cast<std::size_t>(i);
  return c;
}

int degree_for(std::size_t n, int d) {
  if (n < 1) throw std::invalid_argument("degree_for: N must be >= 1");
  int K = 0;
  while (poly_dim(K, d) < n) ++K;
  return K;
}

int degree_floor_formula(std::size_t n) {
  return static_cast<int>(std::floor(std::sqrt(2.0) * std::sqrt(static_cast<double>(n) + 0.125) - 1.5));
}

std::vector<std::array<int, 2>> graded_exponents(int dim, int max_degree) {
  std::vector<std::array<int, 2>> out;
  for (int k = 0; k <= max_degree; ++k) {
    if (dim == 1) {
      out.push_back({k, 0});
    } else {
      for (int a = k; a >= 0; --a) out.push_back({a, k - a});
    }
  }
  return out;
}

MonomialBasis MonomialBasis::graded(int dim, std::size_t count) {
  MonomialBasis b;
  b.dim = dim;
  auto all = graded_exponents(dim, degree_for(count, dim));
  b.exps.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  return b;
}

int MonomialBasis::degree() const { return exps.empty() ? 0 : exps.back()[0] + exps.back()[1]; }

double MonomialBasis::eval(std::size_t j, const Point& x) const {
  return pw(x[0], exps[j][0]) * (dim == 1 ? 1.0 : pw(x[1], exps[j][1]));
}

std::string MonomialBasis::name(std::size_t j) const {
  const auto [a, b] = exps[j];
  if (a == 0 && b == 0) return "1";
  std::string s;
  auto part = [&](const char* v, int e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (e > 1) s += "^" + std::to_string(e);
  };
  part(dim == 1 ? "x" : "x1", a);
  part("x2", b);
  return s;
}

CMatrix build_P(const NodeSet& nodes, const MonomialBasis& basis) {
  CMatrix p(nodes.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (std::size_t i = 0; i < nodes.size(); ++i) p(i, j) = basis.eval(j, nodes.points[i]);
  }
  return p;
}

CMatrix build_Q(const Problem& problem, const NodeSet& nodes, const MonomialBasis& basis) {
  if (problem.kind == ProblemKind::Duct) throw std::invalid_argument("Q is not defined for the DtN problem");
  const cplx k2 = problem.kappa * problem.kappa;
  CMatrix q(nodes.size(), basis.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Operator op = operator_for(problem, nodes.region[i]);
    const double x1 = nodes.points[i][0];
    const double x2 = problem.dim() == 1 ? 1.0 : nodes.points[i][1];
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const int a = basis.exps[j][0];
      const int b = problem.dim() == 1 ? 0 : basis.exps[j][1];
      const double p = pw(x1, a) * pw(x2, b);
      const double lap = a * (a - 1) * pw(x1, a - 2) * pw(x2, b) + b * (b - 1) * pw(x1, a) * pw(x2, b - 2);
      // The Robin axis is x in 1D and x2 in 2D.
      const double dn = problem.dim() == 1 ? a * pw(x1, a - 1) : b * pw(x1, a) * pw(x2, b - 1);
      cplx v;
      switch (op.kind) {
        case OperatorKind::Helmholtz:
          v = -lap - k2 * p;
          break;
        case OperatorKind::Dirichlet:
          v = p;
          break;
        case OperatorKind::Robin:
          v = op.sign * dn - kI * op.beta * p;
          break;
        case OperatorKind::DtN:
          throw std::invalid_argument("Q is not defined for the DtN problem");
      }
      q(i, j) = v;
    }
  }
  return q;
}

MinimalBasis minimal_basis(const NodeSet& nodes) {
  const std::size_t n = nodes.size();
  MinimalBasis out;
  out.basis.dim = nodes.dim;
  const auto candidates = graded_exponents(nodes.dim, static_cast<int>(2 * n));
  Eigen::MatrixXcd cols(static_cast<Eigen::Index>(n), 0);
  int rank = 0;
  for (const auto& e : candidates) {
    Eigen::MatrixXcd trial(cols.rows(), cols.cols() + 1);
    trial.leftCols(cols.cols()) = cols;
    MonomialBasis one{nodes.dim, {e}};
    for (std::size_t i = 0; i < n; ++i) trial(static_cast<Eigen::Index>(i), cols.cols()) = one.eval(0, nodes.points[i]);
    const int r = rank_of(trial, n);
    if (r > rank) {
      rank = r;
      cols = std::move(trial);
      out.basis.exps.push_back(e);
      if (out.basis.size() == n) break;
    }
  }
  out.M = out.basis.degree();
  return out;
}

std::string case_name(LimitCase c) {
  switch (c) {
    case LimitCase::I:
      return "i";
    case LimitCase::II:
      return "ii";
    case LimitCase::III:
      return "iii";
    case LimitCase::IV:
      return "iv";
  }
  return "?";
}

RankInfo numerical_rank(const CMatrix& m) {
  RankInfo info;
  const Eigen::MatrixXcd a = to_eigen(m);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return info;
  const double tol = 1e-10 * static_cast<double>(m.rows()) * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++info.rank;
    if (s(i) > 0.1 * tol && s(i) < 10 * tol) info.borderline = true;
  }
  const auto& v = svd.matrixV();
  for (Eigen::Index c = info.rank; c < v.cols(); ++c) {
    std::vector<cplx> vec(static_cast<std::size_t>(v.rows()));
    std::size_t imax = 0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      vec[r] = v(r, c);
      if (std::abs(vec[r]) > std::abs(vec[imax])) imax = static_cast<std::size_t>(r);
    }
    const cplx scale = vec[imax];
    for (auto& z : vec) z /= scale;
    info.nullspace.push_back(std::move(vec));
  }
  return info;
}

LimitReport classify(const Problem& problem, const NodeSet& nodes) {
  LimitReport rep;
  const std::size_t n = nodes.size();
  rep.basis = MonomialBasis::graded(nodes.dim, n);
  const RankInfo p = numerical_rank(build_P(nodes, rep.basis));
  const RankInfo q = numerical_rank(build_Q(problem, nodes, rep.basis));
  rep.rank_P = p.rank;
  rep.rank_Q = q.rank;
  rep.nullspace_P = p.nullspace;
  rep.nullspace_Q = q.nullspace;
  rep.m = static_cast<int>(n) - p.rank;
  rep.p = static_cast<int>(n) - q.rank;
  rep.M = minimal_basis(nodes).M;
  rep.K = degree_for(n, nodes.dim);
  rep.indeterminate = p.borderline || q.borderline;
  if (rep.m == 0 && rep.p == 0) {
    rep.limit_case = LimitCase::I;
  } else if (rep.p == 0) {
    rep.limit_case = LimitCase::II;
  } else if (rep.m == 0) {
    rep.limit_case = LimitCase::III;
  } else {
    rep.limit_case = LimitCase::IV;
  }
  return rep;
}

ProbeResult divergence_probe(const Problem& problem, const NodeSet& nodes, KernelFamily family,
                             const std::vector<double>& eps_list) {
  const EvalGrid grid = eval_grid(problem.domain, 21, 21);
  ProbeResult out;
  std::vector<double> lx, ly;
  for (double eps : eps_list) {
    try {
      SolveOptions opt;
      opt.estimate_condition = false;
      const Solution sol = solve(problem, nodes, Kernel(family, eps), opt);
      const auto vals = evaluate(sol.approx, grid.points);
      double m = 0;
      for (const auto& v : vals) m = std::max(m, std::abs(v));
      if (!std::isfinite(m) || m == 0) continue;
      out.eps.push_back(eps);
      out.max_abs.push_back(m);
      lx.push_back(std::log(eps));
      ly.push_back(std::log(m));
    } catch (const SingularMatrixError&) {
      continue;
    }
  }
  if (lx.size() < 3) throw std::runtime_error("divergence_probe: fewer than 3 usable shape parameters");
  const LineFit f = fit_line(lx, ly);
  out.slope = f.slope;
  out.r2 = f.r2;
  return out;
}

double example_iii_kappa() { return 4.0 * std::sqrt(246.0) / 9.0; }

NodeSet limit_fixture(const std::string& name) {
  std::vector<Point> pts;
  if (name == "example-ii") {
    pts = {{0.5, 0.5}, {1.0, 0.5}};
    for (int k = 0; k <= 3; ++k) pts.push_back({k / 4.0, 0.0});
    for (int k = 0; k <= 3; ++k) pts.push_back({k / 4.0, 1.0});
  } else if (name == "example-iii") {
    pts = {{0.0, 0.0},
           {0.5, 0.0},
           {1.0, 0.0},
           {0.0, 1.0},
           {0.25, 1.0},
           {1.0, 1.0},
           {1.0 / 6.0, (2545.0 - 23.0 * std::sqrt(9233.0)) / 3936.0},
           {0.25, 0.25},
           {0.75, 0.25},
           {0.75, 969.0 / 1804.0}};
  } else if (name == "example-iv") {
    pts = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    for (int k = 0; k <= 5; ++k) pts.push_back({0.5, k / 5.0});
  } else {
    throw std::invalid_argument("unknown fixture '" + name + "'");
  }
  auto tags = rectangle_tags(pts, 1.0);
  return nodes_from_points(2, std::move(pts), std::move(tags));
}

}  // namespace helmrbf
