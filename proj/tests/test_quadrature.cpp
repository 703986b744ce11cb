#include <doctest.h>

#include <cmath>

#include "helmrbf/kernels.hpp"
#include "helmrbf/quadrature.hpp"
#include "oracles.hpp"

using namespace helmrbf;

TEST_SUITE("quadrature") {

TEST_CASE("closed-form integrals") {
  auto s = integrate([](double x) { return std::sin(M_PI * x); }, 0, 1, 1e-10);
  CHECK(std::abs(s.value - 2 / M_PI) <= 1e-10);
  CHECK(s.converged);
  auto c = integrate([](double x) { return x * x * x; }, 0, 1, 1e-10);
  CHECK(c.value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("base rule exactness") {
  // The 7-point Kronrod extension is exact through degree 9 and the embedded
  // Lobatto rule through degree 5, so quintics converge on the first panel.
  auto r5 = integrate([](double x) { return 6 * std::pow(x, 5) - x * x; }, -0.5, 2, 1e-12);
  CHECK(r5.n_evals == 7);
  CHECK(r5.value == doctest::Approx(std::pow(2, 6) - std::pow(-0.5, 6) - (8 + 0.125) / 3).epsilon(1e-14));
}

TEST_CASE("multiquadric profile against Simpson") {
  auto f = [](double x) { return std::sqrt(1 + std::pow(5 * (x - 0.3), 2)); };
  const double ref = oracle::simpson(f, 0, 1);
  auto r = integrate(f, 0, 1, 1e-8);
  CHECK(std::abs(r.value - ref) <= 1e-8);
}

TEST_CASE("mode inner products") {
  Slice unit{0, 1};
  auto one = inner_product_mode([](double) { return 1.0; }, 1, unit, 1e-12);
  CHECK(std::abs(one.value - std::sqrt(2.0) * 2 / M_PI) <= 1e-12);
  CHECK_THROWS_AS(inner_product_mode([](double) { return 1.0; }, 0, unit, 1e-12), std::invalid_argument);

  // Orthonormality on a rectangle slice and on duct slices.
  auto guide = duct_m();
  for (const Domain& dom : {Domain{Rectangle{1.0}}, Domain{Rectangle{0.7}}, Domain{guide}}) {
    for (double x2 : {0.0, 0.3, 0.55}) {
      const Slice s = slice_at(dom, x2);
      for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) {
          auto ip = inner_product_mode([&](double x1) { return mode_shape(s, n, x1); }, m, x2, dom, 1e-12);
          CHECK(std::abs(ip.value - (m == n ? 1.0 : 0.0)) <= 1e-10);
        }
    }
  }
}

TEST_CASE("kernel trace on a duct slice against Simpson") {
  const Domain dom = duct_m();
  const Slice s = slice_at(dom, 0.0);
  Kernel k(KernelFamily::Multiquadric, 5);
  const Point c{0.42, 0.06};
  auto g = [&](double x1) { return k.eval(std::hypot(x1 - c[0], 0.0 - c[1])); };
  auto r = inner_product_mode(g, 2, 0.0, dom, 1e-10);
  const double ref = oracle::simpson([&](double x1) { return g(x1) * mode_shape(s, 2, x1); }, s.lo, s.hi);
  CHECK(std::abs(r.value - ref) <= 1e-9);
}

TEST_CASE("evaluation count grows as the tolerance tightens") {
  const Domain dom = duct_m();
  Kernel k(KernelFamily::Multiquadric, 7);
  for (double x2 : {0.0, 1.0}) {
    for (int m = 1; m <= 4; ++m) {
      for (const Point c : {Point{0.1, 0.0}, Point{0.5, 0.2}, Point{0.35, 0.8}}) {
        auto g = [&](double x1) { return k.eval(std::hypot(x1 - c[0], x2 - c[1])); };
        long last = 0;
        for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
          auto r = inner_product_mode(g, m, x2, dom, tol);
          CHECK(r.n_evals >= last);
          last = r.n_evals;
        }
      }
    }
  }
}

TEST_CASE("linearity") {
  auto f = [](double x) { return std::exp(-3 * x) * std::cos(7 * x); };
  auto g = [](double x) { return 1 / (1 + 25 * x * x); };
  const double tol = 1e-9, a = 2.5, b = -1.25;
  auto If = integrate(f, -1, 1, tol).value;
  auto Ig = integrate(g, -1, 1, tol).value;
  auto Ih = integrate([&](double x) { return a * f(x) + b * g(x); }, -1, 1, tol).value;
  CHECK(std::abs(Ih - (a * If + b * Ig)) <= 2 * tol * (std::abs(a) + std::abs(b)));
}

TEST_CASE("complex and vector valued integrands") {
  auto z = integrate([](double x) { return std::polar(1.0, 3 * x); }, 0, 1, 1e-12);
  const cplx exact = (std::polar(1.0, 3.0) - 1.0) / cplx(0, 3);
  CHECK(std::abs(z.value - exact) <= 1e-12);

  using V = std::valarray<cplx>;
  auto v = integrate([](double x) { return V{cplx(x), cplx(0, x * x), std::polar(1.0, 3 * x)}; }, 0, 1, 1e-12);
  CHECK(std::abs(v.value[0] - 0.5) <= 1e-12);
  CHECK(std::abs(v.value[1] - cplx(0, 1.0 / 3)) <= 1e-12);
  CHECK(std::abs(v.value[2] - exact) <= 1e-12);
}

TEST_CASE("non-convergence is reported, not thrown") {
  auto step = integrate([](double x) { return x < 1.0 / 3 ? 0.0 : 1.0; }, 0, 1, 1e-300);
  CHECK_FALSE(step.converged);
  CHECK(std::abs(step.value - 2.0 / 3) < 1e-6);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1, 0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0, 1, 0.0), std::invalid_argument);
}

}
