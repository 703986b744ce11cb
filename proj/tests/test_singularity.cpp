#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helmrbf/collocation.hpp"
#include "helmrbf/singularity.hpp"

using namespace helmrbf;

TEST_SUITE("singularity") {

TEST_CASE("pencil reproduces the rescaled collocation matrix") {
  const cplx k = 2 * M_PI;
  for (auto f : {KernelFamily::Multiquadric, KernelFamily::Gaussian}) {
    auto nodes = nodes_interval(9);
    Kernel kern(f, 3);
    auto pencil = build_pencil(nodes, kern);
    auto m = evaluate_pencil(pencil, k);
    auto a = assemble_nonsymmetric(Problem::one_d(k), nodes, kern);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const cplx scale = nodes.region[i] == kInterior ? cplx(-1) : cplx(0, 1) * k;
      for (std::size_t j = 0; j < nodes.size(); ++j)
        CHECK(std::abs(m(i, j) - scale * a.matrix(i, j)) <= 1e-12 * std::max(1.0, std::abs(m(i, j))));
    }
  }
}

TEST_CASE("pencil block structure") {
  auto nodes = nodes_interval(6);
  auto p = build_pencil(nodes, Kernel(KernelFamily::Multiquadric, 5));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (nodes.region[i] == kInterior) CHECK(p.B(i, j) == 0.0);
      if (nodes.region[i] != kInterior) CHECK(p.C(i, j) == 0.0);
      CHECK(p.A(i, j) == Kernel(KernelFamily::Multiquadric, 5).eval(std::abs(nodes.points[i][0] - nodes.points[j][0])));
    }
}

TEST_CASE("Gaussian interpolation matrix is positive definite") {
  auto nodes = nodes_interval(10);
  auto p = build_pencil(nodes, Kernel(KernelFamily::Gaussian, 2));
  double lo = INFINITY;
  for (auto z : eig(to_complex(p.A))) lo = std::min(lo, z.real());
  CHECK(lo > 0);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) CHECK(p.A(i, j) == p.A(j, i));
}

TEST_CASE("singular wavenumber properties") {
  for (auto [f, eps] : {std::pair{KernelFamily::Multiquadric, 5.0}, std::pair{KernelFamily::Gaussian, 10.0}}) {
    for (int n : {6, 8, 10}) {
      auto pencil = build_pencil(nodes_interval(n), Kernel(f, eps));
      auto ks = singular_wavenumbers(pencil);
      CAPTURE(n);
      CAPTURE(kernel_token(f));
      REQUIRE(ks.size() == static_cast<std::size_t>(2 * n));
      CHECK(std::is_sorted(ks.begin(), ks.end(), [](cplx a, cplx b) { return a.real() < b.real(); }));
      CHECK(count_structural_zeros(ks) == 2);
      CHECK(pairing_defect(ks) <= 1e-6);
      int banded = 0;
      for (auto k : ks) {
        if (!has_positive_real_part(k, ks)) continue;
        CHECK(relative_sigma_min(pencil, k) <= 1e-6);
        banded += std::abs(k.imag()) < 0.5;
      }
      CHECK(banded <= n - 1);
    }
  }
}

TEST_CASE("no singular wavenumbers in the resolved band") {
  for (int n = 6; n <= 14; n += 2) {
    auto ks = singular_wavenumbers(build_pencil(nodes_interval(n), Kernel(KernelFamily::Multiquadric, 5)));
    for (auto k : ks) {
      if (!has_positive_real_part(k, ks) || std::abs(k.imag()) >= 0.5) continue;
      CAPTURE(n);
      CAPTURE(k);
      CHECK(resolution_of(k, n) < 4);
    }
  }
}

TEST_CASE("resolution and helpers") {
  CHECK(resolution_of(2 * M_PI, 10) == doctest::Approx(10));
  CHECK(resolution_of(M_PI, 1) == doctest::Approx(2));
  std::vector<cplx> v{cplx(1, 2), cplx(-1, 2), 0.0};
  CHECK(pairing_defect(v) < 1e-15);
  CHECK(count_structural_zeros(v) == 1);
  CHECK(pairing_defect({cplx(1, 2), cplx(-1, 3)}) > 0.1);
}

TEST_CASE("singular A is reported") {
  Pencil p{RMatrix(2, 2), RMatrix(2, 2), RMatrix(2, 2)};
  CHECK_THROWS_AS(singular_wavenumbers(p), SingularMatrixError);
}

}
