#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "helmrbf/collocation.hpp"

namespace helmrbf {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

// phi, phi', phi'' in x for phi(eps (x - c)).
std::array<Real, 3> derivs(KernelFamily family, const Real& eps, const Real& offset) {
  const Real t = eps * offset;
  const Real t2 = t * t;
  switch (family) {
    case KernelFamily::Multiquadric: {
      const Real s = sqrt(1 + t2);
      return {s, eps * t / s, eps * eps / (s * s * s)};
    }
    case KernelFamily::Gaussian: {
      const Real g = exp(-t2);
      return {g, -2 * eps * t * g, eps * eps * (4 * t2 - 2) * g};
    }
    case KernelFamily::InverseQuadratic: {
      const Real u = 1 / (1 + t2);
      return {u, -2 * eps * t * u * u, eps * eps * (6 * t2 - 2) * u * u * u};
    }
  }
  return {};
}

}  // namespace

std::vector<cplx> solve_evaluate_1d_extended(const Problem& problem, const NodeSet& nodes, const Kernel& kernel,
                                             std::span<const Point> points) {
  if (problem.kind != ProblemKind::OneD) throw std::invalid_argument("extended solve is 1D only");
  problem.validate();
  const std::size_t n = nodes.size();
  const Real eps = kernel.shape();
  const Real kr = problem.kappa.real();
  const Real ki = problem.kappa.imag();
  const Real k2r = kr * kr - ki * ki;
  const Real k2i = 2 * kr * ki;

  // Real embedding [Re M, -Im M; Im M, Re M] [a; b] = [Re f; Im f].
  const std::size_t m = 2 * n;
  std::vector<Real> a(m * m);
  std::vector<Real> rhs(m);
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return a[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    const int tag = nodes.region[i];
    if (tag == kLeft) {
      rhs[i] = 2 * ki;  // -2 i kappa
      rhs[n + i] = -2 * kr;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = derivs(kernel.family(), eps, Real(nodes.points[i][0]) - Real(nodes.points[j][0]));
      Real re, im;
      if (tag == kInterior) {
        re = -d[2] - k2r * d[0];
        im = -k2i * d[0];
      } else {
        const Real sign = tag == kLeft ? -1 : 1;
        // sign phi' - i kappa phi
        re = sign * d[1] + ki * d[0];
        im = -kr * d[0];
      }
      at(i, j) = re;
      at(i, n + j) = -im;
      at(n + i, j) = im;
      at(n + i, n + j) = re;
    }
  }

  for (std::size_t k = 0; k < m; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < m; ++i) {
      if (abs(at(i, k)) > abs(at(p, k))) p = i;
    }
    if (at(p, k) == 0) throw SingularMatrixError(k);
    if (p != k) {
      for (std::size_t j = 0; j < m; ++j) std::swap(at(k, j), at(p, j));
      std::swap(rhs[k], rhs[p]);
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      const Real f = at(i, k) / at(k, k);
      if (f == 0) continue;
      for (std::size_t j = k; j < m; ++j) at(i, j) -= f * at(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Real> x(m);
  for (std::size_t k = m; k-- > 0;) {
    Real s = rhs[k];
    for (std::size_t j = k + 1; j < m; ++j) s -= at(k, j) * x[j];
    x[k] = s / at(k, k);
  }

  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    Real re = 0, im = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Real phi = derivs(kernel.family(), eps, Real(p[0]) - Real(nodes.points[j][0]))[0];
      re += x[j] * phi;
      im += x[n + j] * phi;
    }
    out.emplace_back(static_cast<double>(re), static_cast<double>(im));
  }
  return out;
}

}  // namespace helmrbf
