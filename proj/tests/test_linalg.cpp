#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helmrbf/linalg.hpp"
#include "oracles.hpp"

using namespace helmrbf;

namespace {

using oracle::cplx;

// Greedy multiset distance: largest gap after nearest-neighbor matching.
double multiset_gap(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0;
  for (const cplx& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const cplx& p, const cplx& q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

std::vector<cplx> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

// U diag(s) V^H with random unitary factors.
CMatrix planted(const std::vector<double>& s, std::uint64_t seed) {
  const std::size_t n = s.size();
  CMatrix u = oracle::random_unitary(n, seed), v = oracle::random_unitary(n, seed + 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) *= s[j];
  CMatrix vh(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) vh(i, j) = std::conj(v(j, i));
  return oracle::matmul(u, vh);
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("small solves") {
  auto id = CMatrix::identity(3);
  std::vector<cplx> b{1, cplx(0, 1), -2};
  auto x = lu_solve(id, b);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) == 0.0);

  CMatrix a(2, 2);
  a(0, 0) = 2;
  a(1, 1) = cplx(0, 1);
  auto y = lu_solve(a, std::vector<cplx>{4, cplx(0, 1)});
  CHECK(std::abs(y[0] - 2.0) < 1e-15);
  CHECK(std::abs(y[1] - 1.0) < 1e-15);
}

TEST_CASE("planted solution is recovered") {
  const std::size_t n = 50;
  auto a = oracle::random_matrix(n, 11);
  auto xs = random_vector(n, 12);
  auto rhs = multiply(a, xs);
  const double kappa = cond_svd(a);
  for (Exec e : {Exec::Serial, Exec::Parallel}) {
    auto x = lu_solve(a, rhs, e);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - xs[i]));
    CHECK(err <= 1e-10 * kappa * norm_inf(xs));
  }
}

TEST_CASE("solve round trip up to n = 200") {
  for (std::size_t n : {5, 37, 64, 130, 200}) {
    auto a = oracle::random_matrix(n, n);
    auto b = random_vector(n, n + 1);
    for (Exec e : {Exec::Serial, Exec::Parallel}) {
      auto x = lu_solve(a, b, e);
      auto ax = multiply(a, x);
      double res = 0;
      for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(ax[i] - b[i]));
      CAPTURE(n);
      CHECK(res <= 1e-10 * norm_inf(a) * norm_inf(x));
    }
  }
}

TEST_CASE("factor reconstruction") {
  const std::size_t n = 90;
  auto a = oracle::random_matrix(n, 3);
  auto lu = lu_factor(a);
  const auto& p = lu.packed();
  CMatrix l = CMatrix::identity(n), u(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) (i > j ? l(i, j) : u(i, j)) = p(i, j);
  auto prod = oracle::matmul(l, u);
  // Apply the row interchanges to a copy of A.
  CMatrix pa = a;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = lu.pivots()[k];
    if (r != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(pa(k, j), pa(r, j));
  }
  double diff = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) diff += std::norm(prod(i, j) - pa(i, j));
  CHECK(std::sqrt(diff) <= 1e-12 * norm_fro(a));
  CHECK(lu.growth() >= 0.0);
  CHECK_FALSE(lu.growth_flag());
}

TEST_CASE("multiple right-hand sides, adjoint solves and determinant") {
  const std::size_t n = 20;
  auto a = oracle::random_matrix(n, 21);
  auto lu = lu_factor(a);
  CMatrix b(n, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    auto v = random_vector(n, 30 + j);
    for (std::size_t i = 0; i < n; ++i) b(i, j) = v[i];
  }
  auto x = lu.solve(b);
  auto r = oracle::matmul(a, x);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(r(i, j) - b(i, j)) < 1e-10);

  auto c = random_vector(n, 40);
  auto y = lu.solve_adjoint(c);
  auto ahy = multiply_adjoint(a, y);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ahy[i] - c[i]) < 1e-10);

  const cplx det = oracle::det_by_elimination(a);
  CHECK(std::abs(lu.determinant() - det) <= 1e-10 * std::abs(det));
}

TEST_CASE("singular and non-finite input") {
  CMatrix a(3, 3);
  a(0, 0) = 1;
  a(1, 0) = 2;
  a(2, 2) = 5;  // column 1 is zero
  try {
    lu_factor(a);
    FAIL("expected a singular matrix error");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot() == 1);
  }
  CHECK_THROWS_AS(lu_factor(a, Exec::Serial), SingularMatrixError);
  CHECK(std::isinf(cond_estimate(a)));
  CMatrix bad = CMatrix::identity(2);
  bad(1, 0) = NAN;
  CHECK_THROWS_AS(lu_factor(bad), NonFiniteMatrixError);
  CHECK_THROWS(lu_solve(CMatrix(2, 3), std::vector<cplx>{1, 2}));
}

TEST_CASE("condition estimates") {
  CMatrix d = CMatrix::identity(2);
  d(1, 1) = 1e-6;
  const double c = cond_estimate(d);
  CHECK(c >= 0.5e6);
  CHECK(c <= 2e6);
  CHECK(cond_estimate(CMatrix::identity(7)) == doctest::Approx(1.0).epsilon(1e-6));

  std::vector<double> s(40);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(10.0, -8.0 * i / (s.size() - 1));
  auto a = planted(s, 5);
  const double est = cond_estimate(a);
  CHECK(est >= 1e8 / 10);
  CHECK(est <= 1e8 * 10);
  CHECK(cond_svd(a) == doctest::Approx(1e8).epsilon(1e-4));
  auto sv = singular_values(a);
  REQUIRE(sv.size() == 40);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  for (std::size_t i = 0; i < 40; i += 13) CHECK(sv[i] == doctest::Approx(s[i]).epsilon(1e-6));
}

TEST_CASE("eigenvalues of small matrices") {
  CMatrix d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = cplx(0, 2);
  d(2, 2) = -3;
  CHECK(multiset_gap(eig(d), {1, cplx(0, 2), -3}) < 1e-12);

  CMatrix comp(2, 2);
  comp(0, 1) = 1;
  comp(1, 0) = -2;
  comp(1, 1) = 3;
  CHECK(multiset_gap(eig(comp), {1, 2}) < 1e-12);
  CHECK(eig(CMatrix(0, 0)).empty());
}

TEST_CASE("eigenvalues against trace and determinant") {
  const std::size_t n = 30;
  auto a = oracle::random_matrix(n, 99);
  auto ev = eig(a);
  REQUIRE(ev.size() == n);
  cplx tr = 0, sum = 0, prod = 1;
  for (std::size_t i = 0; i < n; ++i) tr += a(i, i);
  for (auto z : ev) {
    sum += z;
    prod *= z;
  }
  CHECK(std::abs(sum - tr) <= 1e-8 * norm_fro(a));
  const cplx det = oracle::det_by_elimination(a);
  CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));

  // Each eigenvalue leaves A - lambda I numerically singular.
  for (std::size_t k = 0; k < n; k += 3) {
    CMatrix s = a;
    for (std::size_t i = 0; i < n; ++i) s(i, i) -= ev[k];
    auto sv = singular_values(s);
    CHECK(*std::min_element(sv.begin(), sv.end()) <= 1e-8 * norm_fro(a));
  }
}

TEST_CASE("eigenvalues are invariant under permutation similarity") {
  const std::size_t n = 25;
  auto a = oracle::random_matrix(n, 7);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(8));
  CMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) b(i, j) = a(perm[i], perm[j]);
  CHECK(multiset_gap(eig(a), eig(b)) <= 1e-8 * norm_fro(a));
}

TEST_CASE("Hermitian input gives real eigenvalues") {
  const std::size_t n = 40;
  auto g = oracle::random_matrix(n, 17);
  CMatrix h(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) h(i, j) = g(i, j) + std::conj(g(j, i));
  for (auto z : eig(h)) CHECK(std::abs(z.imag()) <= 1e-8 * norm_fro(h));
}

TEST_CASE("matrix helpers") {
  auto a = oracle::random_matrix(6, 1), b = oracle::random_matrix(6, 2);
  auto c1 = multiply(a, b), c2 = oracle::matmul(a, b);
  double diff = 0;
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 6; ++i) diff = std::max(diff, std::abs(c1(i, j) - c2(i, j)));
  CHECK(diff < 1e-13);
  auto ah = adjoint(a);
  CHECK(ah(2, 4) == std::conj(a(4, 2)));
  RMatrix r(2, 2, 1.5);
  CHECK(to_complex(r)(1, 0) == cplx(1.5, 0));
}

}
