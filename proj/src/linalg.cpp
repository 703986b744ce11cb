#include "helmrbf/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "helmrbf/geometry.hpp"

namespace helmrbf {

namespace {

double cabs1(const cplx& z) { return std::abs(z.real()) + std::abs(z.imag()); }

double max_abs(const CMatrix& a) {
  double m = 0;
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) m = std::max(m, std::abs(a.data()[k]));
  return m;
}

void check_finite(const CMatrix& a) {
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) {
    const cplx z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFiniteMatrixError();
  }
}

std::size_t pivot_row(const CMatrix& a, std::size_t k) {
  std::size_t p = k;
  double best = cabs1(a(k, k));
  for (std::size_t i = k + 1; i < a.rows(); ++i) {
    const double v = cabs1(a(i, k));
    if (v > best) {
      best = v;
      p = i;
    }
  }
  return p;
}

void swap_rows(CMatrix& a, std::size_t r1, std::size_t r2, std::size_t c0, std::size_t c1) {
  if (r1 == r2) return;
  for (std::size_t j = c0; j < c1; ++j) std::swap(a(r1, j), a(r2, j));
}

// Serial reference: textbook right-looking elimination.
void factor_unblocked(CMatrix& a, std::vector<std::size_t>& piv) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = pivot_row(a, k);
    if (a(p, k) == cplx(0)) throw SingularMatrixError(k);
    piv[k] = p;
    swap_rows(a, k, p, 0, n);
    const cplx inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const cplx t = a(k, j);
      if (t == cplx(0)) continue;
      cplx* cj = a.col(j).data();
      const cplx* ck = a.col(k).data();
      for (std::size_t i = k + 1; i < n; ++i) cj[i] -= ck[i] * t;
    }
  }
}

// Panel-blocked version. Each trailing column receives its updates in the
// same order as the reference, so both produce identical factors.
void factor_blocked(CMatrix& a, std::vector<std::size_t>& piv) {
  const std::size_t n = a.rows();
  constexpr std::size_t nb = 48;
  for (std::size_t k0 = 0; k0 < n; k0 += nb) {
    const std::size_t k1 = std::min(n, k0 + nb);
    for (std::size_t k = k0; k < k1; ++k) {
      const std::size_t p = pivot_row(a, k);
      if (a(p, k) == cplx(0)) throw SingularMatrixError(k);
      piv[k] = p;
      swap_rows(a, k, p, k0, k1);
      const cplx inv = 1.0 / a(k, k);
      for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv;
      for (std::size_t j = k + 1; j < k1; ++j) {
        const cplx t = a(k, j);
        if (t == cplx(0)) continue;
        cplx* cj = a.col(j).data();
        const cplx* ck = a.col(k).data();
        for (std::size_t i = k + 1; i < n; ++i) cj[i] -= ck[i] * t;
      }
    }
    const auto outside = static_cast<std::ptrdiff_t>(n - (k1 - k0));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < outside; ++jj) {
      const std::size_t j = jj < static_cast<std::ptrdiff_t>(k0) ? static_cast<std::size_t>(jj)
                                                                 : static_cast<std::size_t>(jj) + (k1 - k0);
      cplx* cj = a.col(j).data();
      for (std::size_t k = k0; k < k1; ++k) {
        if (piv[k] != k) std::swap(cj[k], cj[piv[k]]);
      }
      if (j < k1) continue;
      for (std::size_t k = k0; k < k1; ++k) {
        const cplx t = cj[k];
        if (t == cplx(0)) continue;
        const cplx* ck = a.col(k).data();
        for (std::size_t i = k + 1; i < n; ++i) cj[i] -= ck[i] * t;
      }
    }
  }
}

}  // namespace

CMatrix to_complex(const RMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.rows() * m.cols(); ++k) out.data()[k] = m.data()[k];
  return out;
}

double norm_fro(const CMatrix& a) {
  double s = 0;
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) s += std::norm(a.data()[k]);
  return std::sqrt(s);
}

double norm_inf(const CMatrix& a) {
  double best = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    best = std::max(best, row);
  }
  return best;
}

double norm_inf(std::span<const cplx> v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

std::vector<cplx> multiply(const CMatrix& a, std::span<const cplx> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const cplx t = x[j];
    const cplx* cj = a.col(j).data();
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += cj[i] * t;
  }
  return y;
}

std::vector<cplx> multiply_adjoint(const CMatrix& a, std::span<const cplx> x) {
  if (x.size() != a.rows()) throw std::invalid_argument("multiply_adjoint: dimension mismatch");
  std::vector<cplx> y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    cplx s = 0;
    const cplx* cj = a.col(j).data();
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::conj(cj[i]) * x[i];
    y[j] = s;
  }
  return y;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto y = multiply(a, b.col(j));
    std::copy(y.begin(), y.end(), c.col(j).begin());
  }
  return c;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = std::conj(a(i, j));
  }
  return t;
}

LUFactors::LUFactors(CMatrix packed, std::vector<std::size_t> pivots, double growth)
    : lu_(std::move(packed)), piv_(std::move(pivots)), growth_(growth) {}

std::vector<cplx> LUFactors::solve(std::span<const cplx> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw std::invalid_argument("lu solve: right-hand side has wrong length");
  std::vector<cplx> x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[piv_[k]]);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx t = x[j];
    if (t == cplx(0)) continue;
    const cplx* cj = lu_.col(j).data();
    for (std::size_t i = j + 1; i < n; ++i) x[i] -= cj[i] * t;
  }
  for (std::size_t j = n; j-- > 0;) {
    x[j] /= lu_(j, j);
    const cplx t = x[j];
    if (t == cplx(0)) continue;
    const cplx* cj = lu_.col(j).data();
    for (std::size_t i = 0; i < j; ++i) x[i] -= cj[i] * t;
  }
  return x;
}

CMatrix LUFactors::solve(const CMatrix& b) const {
  CMatrix x(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto col = solve(b.col(j));
    std::copy(col.begin(), col.end(), x.col(j).begin());
  }
  return x;
}

std::vector<cplx> LUFactors::solve_adjoint(std::span<const cplx> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw std::invalid_argument("lu solve: right-hand side has wrong length");
  std::vector<cplx> x(b.begin(), b.end());
  // U^H y = b (lower triangular), column j of U is row j of U^H.
  for (std::size_t j = 0; j < n; ++j) {
    cplx s = x[j];
    const cplx* cj = lu_.col(j).data();
    for (std::size_t i = 0; i < j; ++i) s -= std::conj(cj[i]) * x[i];
    x[j] = s / std::conj(lu_(j, j));
  }
  // L^H z = y (unit upper triangular).
  for (std::size_t j = n; j-- > 0;) {
    cplx s = x[j];
    const cplx* cj = lu_.col(j).data();
    for (std::size_t i = j + 1; i < n; ++i) s -= std::conj(cj[i]) * x[i];
    x[j] = s;
  }
  for (std::size_t k = n; k-- > 0;) std::swap(x[k], x[piv_[k]]);
  return x;
}

cplx LUFactors::determinant() const {
  cplx d = 1;
  for (std::size_t k = 0; k < size(); ++k) {
    d *= lu_(k, k);
    if (piv_[k] != k) d = -d;
  }
  return d;
}

LUFactors lu_factor(CMatrix a, Exec exec) {
  if (!a.square()) throw std::invalid_argument("lu_factor: matrix must be square");
  check_finite(a);
  const double amax = max_abs(a);
  std::vector<std::size_t> piv(a.rows());
  if (exec == Exec::Serial) {
    factor_unblocked(a, piv);
  } else {
    factor_blocked(a, piv);
  }
  double umax = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) umax = std::max(umax, std::abs(a(i, j)));
  }
  return LUFactors(std::move(a), std::move(piv), amax > 0 ? umax / amax : 0.0);
}

std::vector<cplx> lu_solve(const CMatrix& a, std::span<const cplx> b, Exec exec) {
  if (b.size() != a.rows()) throw std::invalid_argument("lu_solve: right-hand side has wrong length");
  return lu_factor(a, exec).solve(b);
}

namespace {

template <class Op>
double power_iteration(std::size_t n, Op apply) {
  Xorshift64 rng(0x5eed);
  std::vector<cplx> x(n);
  for (auto& z : x) z = cplx(rng.symmetric(), rng.symmetric());
  double lambda = 0;
  for (int it = 0; it < 60; ++it) {
    double nx = 0;
    for (const auto& z : x) nx += std::norm(z);
    nx = std::sqrt(nx);
    if (!(nx > 0) || !std::isfinite(nx)) return std::numeric_limits<double>::infinity();
    for (auto& z : x) z /= nx;
    auto y = apply(x);
    double ny = 0;
    for (const auto& z : y) ny += std::norm(z);
    ny = std::sqrt(ny);
    if (!std::isfinite(ny)) return std::numeric_limits<double>::infinity();
    const double prev = lambda;
    lambda = ny;
    x = std::move(y);
    if (it > 4 && std::abs(lambda - prev) <= 1e-4 * lambda) break;
  }
  return lambda;
}

}  // namespace

double cond_estimate(const CMatrix& a, const LUFactors& lu) {
  const std::size_t n = a.rows();
  if (n == 0) return 1.0;
  const double smax2 =
      power_iteration(n, [&](const std::vector<cplx>& x) { return multiply_adjoint(a, multiply(a, x)); });
  const double sinv2 = power_iteration(n, [&](const std::vector<cplx>& x) {
    return lu.solve(lu.solve_adjoint(x));
  });
  const double c = std::sqrt(smax2) * std::sqrt(sinv2);
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

double cond_estimate(const CMatrix& a) {
  try {
    const auto lu = lu_factor(a, Exec::Parallel);
    return cond_estimate(a, lu);
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::vector<double> singular_values(const CMatrix& a) {
  Eigen::Map<const Eigen::MatrixXcd> m(a.data(), static_cast<Eigen::Index>(a.rows()),
                                       static_cast<Eigen::Index>(a.cols()));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double cond_svd(const CMatrix& a) {
  if (a.rows() > 300) throw std::invalid_argument("cond_svd is limited to n <= 300");
  const auto s = singular_values(a);
  if (s.empty()) return 1.0;
  if (s.back() == 0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

}  // namespace helmrbf
