#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <valarray>

#include "helmrbf/geometry.hpp"

namespace helmrbf {

template <class T>
struct QuadResult {
  T value{};
  long n_evals = 0;
  bool converged = true;
};

// Error measure used to compare the embedded rules. Complex values are
// treated as two real integrals sharing evaluations.
inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) {
  return std::max(std::abs(v.real()), std::abs(v.imag()));
}
inline double quad_norm(const std::valarray<std::complex<double>>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, quad_norm(z));
  return m;
}

namespace detail {

constexpr int kMaxQuadDepth = 50;
// Noisy integrands (rounding-level residuals) never meet a tight tolerance;
// refinement stops once this many evaluations have been spent.
constexpr long kMaxQuadEvals = 2'000'000;

template <class T>
T scaled(double c, const T& v) {
  return c * v;
}
inline std::valarray<std::complex<double>> scaled(double c,
                                                  const std::valarray<std::complex<double>>& v) {
  return v * std::complex<double>(c);
}

template <class F, class T>
T lobatto_step(F& f, double a, double b, const T& fa, const T& fb, double tol, int depth, long max_evals,
               QuadResult<T>& acc) {
  // 4-point Gauss-Lobatto with its 7-point Kronrod extension on [a, b].
  static const double alpha = std::sqrt(2.0 / 3.0);
  static const double beta = 1.0 / std::sqrt(5.0);
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  const double mll = m - alpha * h;
  const double ml = m - beta * h;
  const double mr = m + beta * h;
  const double mrr = m + alpha * h;
  const T fmll = f(mll);
  const T fml = f(ml);
  const T fm = f(m);
  const T fmr = f(mr);
  const T fmrr = f(mrr);
  acc.n_evals += 5;

  const T lobatto = scaled(h / 6.0, T((fa + fb) + scaled(5.0, T(fml + fmr))));
  const T kronrod =
      scaled(h / 1470.0, T(scaled(77.0, T(fa + fb)) + scaled(432.0, T(fmll + fmrr)) +
                           scaled(625.0, T(fml + fmr)) + scaled(672.0, fm)));
  if (quad_norm(T(kronrod - lobatto)) <= tol) return kronrod;
  if (depth >= kMaxQuadDepth || acc.n_evals >= max_evals || !(mll > a) || !(b > mrr)) {
    acc.converged = false;
    return kronrod;
  }
  T sum = lobatto_step(f, a, mll, fa, fmll, tol, depth + 1, max_evals, acc);
  sum += lobatto_step(f, mll, ml, fmll, fml, tol, depth + 1, max_evals, acc);
  sum += lobatto_step(f, ml, m, fml, fm, tol, depth + 1, max_evals, acc);
  sum += lobatto_step(f, m, mr, fm, fmr, tol, depth + 1, max_evals, acc);
  sum += lobatto_step(f, mr, mrr, fmr, fmrr, tol, depth + 1, max_evals, acc);
  sum += lobatto_step(f, mrr, b, fmrr, fb, tol, depth + 1, max_evals, acc);
  return sum;
}

}  // namespace detail

// Adaptive Gauss-Lobatto quadrature with absolute tolerance. The value type
// may be double, std::complex<double> or a valarray of complex values (all
// components refined together). n_evals counts every call to f. converged is
// false when the depth or evaluation cap stopped the refinement.
template <class F>
auto integrate(F&& f, double a, double b, double abstol, long max_evals = detail::kMaxQuadEvals) {
  using T = std::decay_t<decltype(f(a))>;
  if (!(a < b)) throw std::invalid_argument("integrate: need a < b");
  if (!(abstol > 0)) throw std::invalid_argument("integrate: abstol must be positive");
  QuadResult<T> out;
  const T fa = f(a);
  const T fb = f(b);
  out.n_evals = 2;
  out.value = detail::lobatto_step(f, a, b, fa, fb, abstol, 0, max_evals, out);
  return out;
}

// Cross-section slice [lo, hi] of a domain at a station x2.
struct Slice {
  double lo = 0;
  double hi = 1;
  double width() const { return hi - lo; }
};

Slice slice_at(const Domain& domain, double x2);

// sqrt(2 / width) sin(m pi (x1 - lo) / width): the cross-section modes,
// orthonormal on the slice (sqrt(2) sin(m pi x1) on a unit slice).
inline double mode_shape(const Slice& s, int m, double x1) {
  return std::sqrt(2.0 / s.width()) * std::sin(m * M_PI * (x1 - s.lo) / s.width());
}

// <g, psi_m> over the slice at the given absolute tolerance.
template <class G>
QuadResult<std::complex<double>> inner_product_mode(G&& g, int m, const Slice& slice,
                                                    double abstol) {
  if (m < 1) throw std::invalid_argument("inner_product_mode: mode index must be >= 1");
  return integrate(
      [&](double x1) { return std::complex<double>(g(x1)) * mode_shape(slice, m, x1); },
      slice.lo, slice.hi, abstol);
}

template <class G>
QuadResult<std::complex<double>> inner_product_mode(G&& g, int m, double x2,
                                                    const Domain& domain, double abstol) {
  return inner_product_mode(std::forward<G>(g), m, slice_at(domain, x2), abstol);
}

}  // namespace helmrbf
