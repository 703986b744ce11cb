#include "helmrbf/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace helmrbf {

Pencil build_pencil(const NodeSet& nodes, const Kernel& kernel) {
  if (nodes.dim != 1) throw std::invalid_argument("pencil is defined for 1D node sets");
  const std::size_t n = nodes.size();
  Pencil p{RMatrix(n, n), RMatrix(n, n), RMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int tag = nodes.region[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = kernel.derivatives_1d(nodes.points[i][0] - nodes.points[j][0]);
      p.A(i, j) = d[0];
      if (tag == kInterior) {
        p.C(i, j) = d[2];
      } else if (tag == kLeft) {
        p.B(i, j) = -d[1];
      } else if (tag == kRight) {
        p.B(i, j) = d[1];
      } else {
        throw std::invalid_argument("pencil: unexpected region tag");
      }
    }
  }
  return p;
}

CMatrix evaluate_pencil(const Pencil& pencil, cplx kappa) {
  const std::size_t n = pencil.A.rows();
  CMatrix m(n, n);
  const cplx k2 = kappa * kappa;
  const cplx ik = cplx(0, 1) * kappa;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) m(i, j) = k2 * pencil.A(i, j) + ik * pencil.B(i, j) + pencil.C(i, j);
  }
  return m;
}

std::vector<cplx> singular_wavenumbers(const Pencil& pencil) {
  const std::size_t n = pencil.A.rows();
  const LUFactors lu = lu_factor(to_complex(pencil.A), Exec::Serial);
  const CMatrix ainv_c = lu.solve(to_complex(pencil.C));
  const CMatrix ainv_b = lu.solve(to_complex(pencil.B));
  CMatrix comp(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) comp(i, n + i) = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      comp(n + i, j) = -ainv_c(i, j);
      comp(n + i, n + j) = cplx(0, -1) * ainv_b(i, j);
    }
  }
  auto ev = eig(std::move(comp));
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

double resolution_of(cplx kappa, int n) {
  if (!(kappa.real() > 0)) throw std::invalid_argument("resolution_of: needs Re(kappa) > 0");
  return 2 * M_PI * n / kappa.real();
}

namespace {

double max_modulus(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

bool is_structural_zero(cplx kappa, const std::vector<cplx>& all, double rel) {
  return std::abs(kappa) <= rel * max_modulus(all);
}

int count_structural_zeros(const std::vector<cplx>& values, double rel) {
  const double scale = max_modulus(values);
  return static_cast<int>(
      std::count_if(values.begin(), values.end(), [&](cplx z) { return std::abs(z) <= rel * scale; }));
}

bool has_positive_real_part(cplx kappa, const std::vector<cplx>& all, double rel) {
  return kappa.real() > rel * max_modulus(all);
}

double pairing_defect(const std::vector<cplx>& values) {
  const double scale = max_modulus(values);
  if (scale == 0) return 0;
  std::vector<bool> used(values.size(), false);
  double worst = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    const cplx image = -std::conj(values[i]);
    std::size_t best = i;
    double dist = std::abs(values[i] - image);
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (used[j] || j == i) continue;
      const double d = std::abs(values[j] - image);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    used[i] = used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst / scale;
}

double relative_sigma_min(const Pencil& pencil, cplx kappa) {
  const CMatrix m = evaluate_pencil(pencil, kappa);
  const auto s = singular_values(m);
  return s.back() / norm_fro(m);
}

}  // namespace helmrbf
