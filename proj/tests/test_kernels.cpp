#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helmrbf/kernels.hpp"

using namespace helmrbf;

namespace {

const KernelFamily kFamilies[] = {KernelFamily::Multiquadric, KernelFamily::Gaussian,
                                  KernelFamily::InverseQuadratic};

// g(x) = phi(eps |x - c|) with c at the origin.
double g(const Kernel& k, double x1, double x2) { return k.eval(std::hypot(x1, x2)); }

bool close_rel(double a, double b, double tol, double scale) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), scale);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("closed-form values") {
  CHECK(Kernel(KernelFamily::Multiquadric, 1).eval(0) == doctest::Approx(1.0));
  CHECK(Kernel(KernelFamily::Gaussian, 1).eval(0) == doctest::Approx(1.0));
  CHECK(Kernel(KernelFamily::InverseQuadratic, 1).eval(0) == doctest::Approx(1.0));
  CHECK(Kernel(KernelFamily::Gaussian, 2).eval(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(Kernel(KernelFamily::Multiquadric, 3).eval(1) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  CHECK(Kernel(KernelFamily::InverseQuadratic, 2).eval(1) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("even in r") {
  for (auto f : kFamilies) {
    Kernel k(f, 1.7);
    for (double r : {0.1, 0.5, 2.0}) CHECK(k.eval(-r) == k.eval(r));
  }
}

TEST_CASE("center derivatives") {
  Kernel mq(KernelFamily::Multiquadric, 2);
  CHECK(mq.derivatives_1d(0)[2] == doctest::Approx(4.0).epsilon(1e-14));
  Kernel ga(KernelFamily::Gaussian, 1);
  CHECK(jet_2d(ga, 0, 0).laplacian == doctest::Approx(-4.0).epsilon(1e-14));
  auto d = Kernel(KernelFamily::InverseQuadratic, 1).derivatives(0);
  CHECK(std::isfinite(d.q1));
  CHECK(std::isfinite(d.d2));
  CHECK(std::isfinite(d.q2));
}

TEST_CASE("radial derivatives match finite differences") {
  // t = eps r; phi'(t) and phi''(t) by central differences of eval.
  for (auto f : kFamilies) {
    for (double eps : {0.7, 1.3, 4.0}) {
      Kernel k(f, eps);
      Kernel unit(f, 1.0);
      for (double r : {0.2, 0.7, 1.5, 3.0}) {
        // Fourth-order stencils; the wide step keeps rounding below 1e-9
        // where phi'' is small next to phi (large t for MQ).
        const double t = eps * r, s = 1e-3, s2 = 1e-2;
        auto u = [&](double x) { return unit.eval(std::abs(x)); };
        const double p1 = (-u(t + 2 * s) + 8 * u(t + s) - 8 * u(t - s) + u(t - 2 * s)) / (12 * s);
        const double p2 =
            (-u(t + 2 * s2) + 16 * u(t + s2) - 30 * u(t) + 16 * u(t - s2) - u(t - 2 * s2)) / (12 * s2 * s2);
        const auto d = k.derivatives(r);
        CAPTURE(kernel_token(f));
        CAPTURE(eps);
        CAPTURE(r);
        CHECK(d.value == doctest::Approx(unit.eval(t)).epsilon(1e-14));
        CHECK(close_rel(d.q1 * t, p1, 1e-6, 1e-6));
        CHECK(close_rel(d.d2, p2, 1e-6, 1e-4));
        CHECK(close_rel(d.q2 * t * t, d.d2 - d.q1, 1e-12, 1e-12));
      }
    }
  }
}

TEST_CASE("1D derivatives match finite differences") {
  for (auto f : kFamilies) {
    Kernel k(f, 2.5);
    for (double x : {-0.9, -0.3, 0.05, 0.4, 1.2}) {
      const auto d = k.derivatives_1d(x);
      const double s = 1e-3;
      // Fourth-order central stencils on the previous derivative.
      auto fd = [&](int n) {
        auto v = [&](double y) { return k.derivatives_1d(y)[n]; };
        return (-v(x + 2 * s) + 8 * v(x + s) - 8 * v(x - s) + v(x - 2 * s)) / (12 * s);
      };
      CAPTURE(kernel_token(f));
      CAPTURE(x);
      CHECK(d[0] == doctest::Approx(k.eval(std::abs(x))).epsilon(1e-14));
      for (int n = 1; n <= 4; ++n) CHECK(close_rel(d[n], fd(n - 1), 1e-6, 1.0));
    }
  }
}

TEST_CASE("Cartesian gradient and Hessian match finite differences") {
  for (auto f : kFamilies) {
    for (double eps : {0.8, 1.3, 3.0}) {
      Kernel k(f, eps);
      for (double r : {0.05, 0.4, 1.0, 2.2, 3.0}) {
        const double th = 0.6;
        const double x1 = r * std::cos(th), x2 = r * std::sin(th);
        const auto jet = jet_2d(k, x1, x2);
        const auto hs = hessian_2d(k, x1, x2);
        const double s = 1e-5, s2 = 1e-4;
        const double gx1 = (g(k, x1 + s, x2) - g(k, x1 - s, x2)) / (2 * s);
        const double gx2 = (g(k, x1, x2 + s) - g(k, x1, x2 - s)) / (2 * s);
        const double g0 = g(k, x1, x2);
        const double h11 = (g(k, x1 + s2, x2) - 2 * g0 + g(k, x1 - s2, x2)) / (s2 * s2);
        const double h22 = (g(k, x1, x2 + s2) - 2 * g0 + g(k, x1, x2 - s2)) / (s2 * s2);
        const double h12 = (g(k, x1 + s2, x2 + s2) - g(k, x1 + s2, x2 - s2) - g(k, x1 - s2, x2 + s2) +
                            g(k, x1 - s2, x2 - s2)) /
                           (4 * s2 * s2);
        const double scale1 = 1e-3 * eps, scale2 = 1e-2 * eps * eps;
        CAPTURE(kernel_token(f));
        CAPTURE(eps);
        CAPTURE(r);
        CHECK(jet.value == doctest::Approx(g0).epsilon(1e-14));
        CHECK(close_rel(jet.dx1, gx1, 1e-6, scale1));
        CHECK(close_rel(jet.dx2, gx2, 1e-6, scale1));
        CHECK(close_rel(hs[0], h11, 1e-6, scale2));
        CHECK(close_rel(hs[1], h12, 1e-6, scale2));
        CHECK(close_rel(hs[2], h22, 1e-6, scale2));
        CHECK(close_rel(jet.laplacian, h11 + h22, 1e-6, scale2));
      }
    }
  }
}

TEST_CASE("derivatives are continuous through the center") {
  for (auto f : kFamilies) {
    Kernel k(f, 1.9);
    const auto a = k.derivatives(0), b = k.derivatives(1e-12);
    CHECK(std::abs(a.value - b.value) < 1e-8);
    CHECK(std::abs(a.q1 - b.q1) < 1e-8);
    CHECK(std::abs(a.d2 - b.d2) < 1e-8);
    CHECK(std::abs(a.q2 - b.q2) < 1e-8);
    const auto h0 = hessian_2d(k, 0, 0), h1 = hessian_2d(k, 1e-12, 0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(h0[i] - h1[i]) < 1e-8);
  }
}

TEST_CASE("Taylor coefficients") {
  auto ga = Kernel(KernelFamily::Gaussian, 1).taylor_coefficients(3);
  REQUIRE(ga.size() == 3);
  CHECK(ga[0] == doctest::Approx(1));
  CHECK(ga[1] == doctest::Approx(-1));
  CHECK(ga[2] == doctest::Approx(0.5));
  auto mq = Kernel(KernelFamily::Multiquadric, 1).taylor_coefficients(4);
  CHECK(mq[0] == doctest::Approx(1));
  CHECK(mq[1] == doctest::Approx(0.5));
  CHECK(mq[2] == doctest::Approx(-0.125));
  CHECK(mq[3] == doctest::Approx(0.0625));
  auto iq = Kernel(KernelFamily::InverseQuadratic, 1).taylor_coefficients(3);
  CHECK(iq[0] == doctest::Approx(1));
  CHECK(iq[1] == doctest::Approx(-1));
  CHECK(iq[2] == doctest::Approx(1));
}

TEST_CASE("truncated Taylor series reproduces the kernel for small t") {
  for (auto f : kFamilies) {
    Kernel k(f, 2.0);
    const auto a = k.taylor_coefficients(8);
    for (double r : {0.0, 0.01, 0.03, 0.05}) {
      const double t = 2.0 * r;
      double s = 0, p = 1;
      for (double aj : a) {
        s += aj * p;
        p *= t * t;
      }
      CHECK(std::abs(s - k.eval(r)) < 1e-10);
    }
  }
}

TEST_CASE("family tokens") {
  CHECK(parse_kernel_family("mq") == KernelFamily::Multiquadric);
  CHECK(parse_kernel_family("ga") == KernelFamily::Gaussian);
  CHECK(parse_kernel_family("iq") == KernelFamily::InverseQuadratic);
  for (auto f : kFamilies) CHECK(parse_kernel_family(kernel_token(f)) == f);
  CHECK_THROWS_AS(parse_kernel_family("tps"), std::invalid_argument);
  CHECK_THROWS(Kernel(KernelFamily::Gaussian, 0.0));
  CHECK_THROWS(Kernel(KernelFamily::Gaussian, -1.0));
}

}
