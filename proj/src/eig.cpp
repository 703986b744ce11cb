#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "helmrbf/linalg.hpp"

namespace helmrbf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double cabs1(const cplx& z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Parlett-Reinsch: scale rows and columns by powers of two until their
// off-diagonal norms are comparable.
void balance(CMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0, c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(a(j, i));
        r += cabs1(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      double g = r / radix;
      double f = 1;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void reduce_hessenberg(CMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1);
    const cplx alpha = -phase * xnorm;
    double vnorm = 0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k) - (i == k + 1 ? alpha : cplx(0));
      vnorm += std::norm(v[i]);
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // A <- (I - 2 v v^H) A
    for (std::size_t j = k; j < n; ++j) {
      cplx s = 0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    // A <- A (I - 2 v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0;
  }
}

std::pair<cplx, cplx> eig_2x2(cplx a, cplx b, cplx c, cplx d) {
  const cplx m = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx l1 = std::abs(m + disc) >= std::abs(m - disc) ? m + disc : m - disc;
  const cplx det = a * d - b * c;
  const cplx l2 = l1 == cplx(0) ? cplx(0) : det / l1;
  return {l1, l2};
}

struct Givens {
  double c;
  cplx s;
};

Givens make_givens(cplx a, cplx b) {
  if (b == cplx(0)) return {1.0, 0.0};
  if (a == cplx(0)) return {0.0, 1.0};
  const double aa = std::abs(a);
  const double r = std::hypot(aa, std::abs(b));
  return {aa / r, (a / aa) * std::conj(b) / r};
}

}  // namespace

std::vector<cplx> eig(CMatrix a) {
  if (!a.square()) throw std::invalid_argument("eig: matrix must be square");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n * n; ++k) {
    const cplx z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFiniteMatrixError();
  }
  std::vector<cplx> ev(n);
  if (n == 0) return ev;
  balance(a);
  reduce_hessenberg(a);
  const double anorm = norm_fro(a);

  std::vector<Givens> rot(n);
  long hi = static_cast<long>(n) - 1;
  int iter = 0;
  long total = 0;
  const long limit = 30 * static_cast<long>(n);
  while (hi >= 0) {
    long l = hi;
    while (l > 0) {
      double scale = cabs1(a(l - 1, l - 1)) + cabs1(a(l, l));
      if (scale == 0) scale = anorm;
      if (cabs1(a(l, l - 1)) <= kEps * scale) {
        a(l, l - 1) = 0;
        break;
      }
      --l;
    }
    if (l == hi) {
      ev[hi] = a(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (l == hi - 1) {
      auto [l1, l2] = eig_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi));
      ev[hi - 1] = l1;
      ev[hi] = l2;
      hi -= 2;
      iter = 0;
      continue;
    }
    if (++total > limit) throw EigenConvergenceError(static_cast<std::size_t>(hi));
    ++iter;

    cplx mu;
    if (iter == 10 || iter == 20) {
      mu = a(hi, hi) + 0.75 * std::abs(a(hi, hi - 1).real()) + 0.75 * std::abs(a(hi - 1, hi - 2));
    } else {
      auto [l1, l2] = eig_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi));
      mu = std::abs(l1 - a(hi, hi)) <= std::abs(l2 - a(hi, hi)) ? l1 : l2;
    }

    for (long k = l; k <= hi; ++k) a(k, k) -= mu;
    for (long k = l; k < hi; ++k) {
      const Givens g = make_givens(a(k, k), a(k + 1, k));
      rot[k] = g;
      for (long j = k; j <= hi; ++j) {
        const cplx x = a(k, j);
        const cplx y = a(k + 1, j);
        a(k, j) = g.c * x + g.s * y;
        a(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
    }
    for (long k = l; k < hi; ++k) {
      const Givens g = rot[k];
      const long last = std::min(k + 2, hi);
      for (long i = l; i <= last; ++i) {
        const cplx x = a(i, k);
        const cplx y = a(i, k + 1);
        a(i, k) = x * g.c + y * std::conj(g.s);
        a(i, k + 1) = -x * g.s + y * g.c;
      }
    }
    for (long k = l; k <= hi; ++k) a(k, k) += mu;
  }
  return ev;
}

}  // namespace helmrbf
