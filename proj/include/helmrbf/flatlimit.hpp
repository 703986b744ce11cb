#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "helmrbf/collocation.hpp"

namespace helmrbf {

// C(K + d, K).
std::size_t poly_dim(int K, int d);
// Smallest K with N <= poly_dim(K, d).
int degree_for(std::size_t n, int d);
// floor(sqrt(2) sqrt(N + 1/8) - 1.5), the closed-form inverse for d = 2 used
// by the small-eps error model.
int degree_floor_formula(std::size_t n);

// Monomials x1^e[0] x2^e[1] in graded order; within a degree the power of x1
// decreases: 1, x1, x2, x1^2, x1 x2, x2^2, ...
struct MonomialBasis {
  int dim = 2;
  std::vector<std::array<int, 2>> exps;

  static MonomialBasis graded(int dim, std::size_t count);
  std::size_t size() const { return exps.size(); }
  int degree() const;
  double eval(std::size_t j, const Point& x) const;
  std::string name(std::size_t j) const;
};

// Every monomial of degree <= max_degree, in graded order.
std::vector<std::array<int, 2>> graded_exponents(int dim, int max_degree);

CMatrix build_P(const NodeSet& nodes, const MonomialBasis& basis);
// Collocation functionals applied to monomials (1D and rectangle problems).
CMatrix build_Q(const Problem& problem, const NodeSet& nodes, const MonomialBasis& basis);

struct MinimalBasis {
  MonomialBasis basis;
  int M = 0;
};
MinimalBasis minimal_basis(const NodeSet& nodes);

enum class LimitCase { I, II, III, IV };
std::string case_name(LimitCase c);

struct RankInfo {
  int rank = 0;
  std::vector<std::vector<cplx>> nullspace;  // coefficient vectors, max |c| = 1
  bool borderline = false;
};
// Singular values below 1e-10 * N * sigma_1 count as zero.
RankInfo numerical_rank(const CMatrix& m);

struct LimitReport {
  MonomialBasis basis;  // first N graded monomials
  int rank_P = 0;
  int rank_Q = 0;
  std::vector<std::vector<cplx>> nullspace_P;
  std::vector<std::vector<cplx>> nullspace_Q;
  int m = 0;
  int p = 0;
  int M = 0;
  int K = 0;
  LimitCase limit_case = LimitCase::I;
  bool indeterminate = false;
};

LimitReport classify(const Problem& problem, const NodeSet& nodes);

struct ProbeResult {
  double slope = 0;
  double r2 = 0;
  std::vector<double> eps;
  std::vector<double> max_abs;
};

// Solves at each eps and fits log max|s| against log eps on a probe grid.
// Needs at least three successful solves.
ProbeResult divergence_probe(const Problem& problem, const NodeSet& nodes, KernelFamily family,
                             const std::vector<double>& eps_list);

// Built-in degenerate node sets for the unit square: "example-ii",
// "example-iii", "example-iv".
NodeSet limit_fixture(const std::string& name);
// Wavenumber that makes the example-iii set PDE-degenerate.
double example_iii_kappa();

}  // namespace helmrbf
