#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "helmrbf/exec.hpp"
#include "helmrbf/geometry.hpp"
#include "helmrbf/kernels.hpp"
#include "helmrbf/linalg.hpp"
#include "helmrbf/quadrature.hpp"

namespace helmrbf {

enum class ProblemKind { OneD, Rectangle, Duct };

// Helmholtz model problems:
//   OneD       -u'' - k^2 u = 0 on (0, 1), -u' - iku = -2ik at 0, u' - iku = 0 at 1.
//   Rectangle  [0, L1] x [0, 1], Dirichlet on x1 = 0, L1, single-mode Robin
//              conditions at x2 = 0 (incoming) and x2 = 1 (outgoing).
//   Duct       curved guide with DtN conditions at both ends and a point-like
//              source represented through its modal amplitudes.
struct Problem {
  ProblemKind kind = ProblemKind::OneD;
  cplx kappa{2 * M_PI, 0};
  int mode = 1;
  double xs = 0.3;
  Domain domain = Interval{};
  double quad_tol = 1e-12;

  static Problem one_d(cplx kappa);
  static Problem rectangle(cplx kappa, int mode, double width = 1.0);
  static Problem duct(cplx kappa, Waveguide guide, double xs = 0.3);

  int dim() const { return kind == ProblemKind::OneD ? 1 : 2; }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// sqrt(k^2 - alpha^2) on the branch with Im >= 0.
cplx axial_wavenumber(cplx kappa, double alpha);
// floor(Re(k) w / pi): number of propagating modes in a slice of width w.
int propagating_modes(cplx kappa, double width);

// Transverse modes of the cross-section at one station x2.
struct ModalBasis {
  double x2 = 0;
  Slice slice;
  int mu = 0;                 // propagating modes are 1..mu
  std::vector<double> alpha;  // alpha[m-1] = m pi / w
  std::vector<cplx> beta;     // beta[m-1] = axial wavenumber of mode m

  static ModalBasis at(const Problem& problem, double x2, int n_modes);
  int size() const { return static_cast<int>(alpha.size()); }
  double psi(int m, double x1) const { return mode_shape(slice, m, x1); }
};

enum class OperatorKind { Helmholtz, Robin, Dirichlet, DtN };

// Row functional of the collocation system. Robin and DtN rows read
//   sign * d/dx_axis u - i * (beta u | sum_m beta_m <u, psi_m> psi_m),
// where the axis is x in 1D and x2 in 2D.
struct Operator {
  OperatorKind kind = OperatorKind::Helmholtz;
  double sign = 1;
  cplx beta = 0;
  const ModalBasis* modes = nullptr;
  double quad_tol = 1e-12;
};

// Operator and data for a node tag. DtN operators reference `modes`, which
// must outlive the returned operator.
Operator operator_for(const Problem& problem, int region, const ModalBasis* modes = nullptr);
cplx rhs_value(const Problem& problem, int region, const Point& p);

// L applied to the kernel centered at `center`, evaluated at `point`.
// Quadrature non-convergence in DtN rows is reported through `warn`.
cplx apply_operator(const Operator& op, const Problem& problem, const Kernel& kernel,
                    const Point& center, const Point& point, bool* warn = nullptr);

struct Assembly {
  CMatrix matrix;
  std::vector<cplx> rhs;
  std::vector<std::size_t> quad_warning_rows;
  long quad_evals = 0;
  // Operator coefficients {c0, c1, c2} per node for the symmetric scheme.
  std::vector<std::array<cplx, 3>> column_ops;
};

// Kansa collocation. The parallel path caches DtN inner products per
// (center, mode, station); the serial reference recomputes them per row.
Assembly assemble_nonsymmetric(const Problem& problem, const NodeSet& nodes, const Kernel& kernel,
                               Exec exec = Exec::Parallel);
// Hermitian 1D system built from L_x conj(L_xi) psi(x, xi).
Assembly assemble_symmetric_1d(const Problem& problem, const NodeSet& nodes, const Kernel& kernel);

// s(x) = sum_k lambda_k phi_k(x); with column_ops set, the basis functions are
// conj(L^k_xi) psi(x, x_k) instead.
struct Approximant {
  Kernel kernel{KernelFamily::Multiquadric, 1.0};
  int dim = 1;
  std::vector<Point> centers;
  std::vector<cplx> lambda;
  std::vector<std::array<cplx, 3>> column_ops;

  struct Jet {
    cplx value = 0;
    cplx d1 = 0;   // d/dx (1D) or d/dx1
    cplx d2 = 0;   // d2/dx2 (1D) or d/dx2
    cplx lap = 0;  // u'' in 1D, Laplacian in 2D
  };
  Jet jet(const Point& x) const;
  cplx value(const Point& x) const { return jet(x).value; }
};

enum class Scheme { Nonsymmetric, Symmetric };

struct Solution {
  Approximant approx;
  double cond = 0;
  bool near_singular = false;
  bool growth_flag = false;
  std::vector<std::size_t> quad_warning_rows;
};

struct SolveOptions {
  Scheme scheme = Scheme::Nonsymmetric;
  Exec exec = Exec::Parallel;
  bool estimate_condition = true;
};

// Throws SingularMatrixError for an exactly singular system.
Solution solve(const Problem& problem, const NodeSet& nodes, const Kernel& kernel,
               const SolveOptions& options = {});

std::vector<cplx> evaluate(const Approximant& approx, std::span<const Point> points,
                           Exec exec = Exec::Parallel);
// Interior residual -lap s - k^2 s (the interior data is zero).
cplx residual_at(const Approximant& approx, const Problem& problem, const Point& x);
std::vector<cplx> residual(const Approximant& approx, const Problem& problem,
                           std::span<const Point> points, Exec exec = Exec::Parallel);

// Closed-form solution where one exists: OneD, Rectangle and the straight duct.
std::optional<std::function<cplx(const Point&)>> analytic_solution(const Problem& problem);

// Max |s - u| over the points.
double max_error(std::span<const cplx> values, std::span<const Point> points,
                 const std::function<cplx(const Point&)>& exact);

// Extended-precision solve of the 1D problem, evaluated at the given points.
// Used in the flat regime where the double-precision system is unusable.
std::vector<cplx> solve_evaluate_1d_extended(const Problem& problem, const NodeSet& nodes,
                                             const Kernel& kernel, std::span<const Point> points);

}  // namespace helmrbf
