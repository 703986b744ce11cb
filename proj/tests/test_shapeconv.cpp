#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helmrbf/shapeconv.hpp"

using namespace helmrbf;

namespace {

std::vector<SweepRecord> planted(double A, double C, FitKind kind) {
  std::vector<SweepRecord> rs;
  for (int n = 10; n <= 40; n += 5) {
    SweepRecord r;
    r.h = 1.0 / n;
    r.true_error = A * std::exp(-C * fit_abscissa(kind, r.h));
    r.estimate = 4 * r.true_error;
    r.cond = 1e8;
    rs.push_back(r);
  }
  return rs;
}

SweepRecord rec(double eps, double est, double res, double tru = -1) {
  SweepRecord r;
  r.eps = eps;
  r.h = 0.1;
  r.estimate = est;
  r.residual_l2 = res;
  r.true_error = tru;
  return r;
}

TruthFn truth_1d(const Problem& p) {
  auto g = eval_grid(Interval{}, 200, 1);
  auto exact = *analytic_solution(p);
  return [g, exact](const Approximant& a) { return max_error(evaluate(a, g.points), g.points, exact); };
}

}  // namespace

TEST_SUITE("shapeconv") {

TEST_CASE("planted exponentials are recovered") {
  for (auto kind : {FitKind::InvH, FitKind::InvSqrtH}) {
    auto f = fit_exponential(planted(3, 0.8, kind), kind);
    CHECK(std::abs(f.A_M - 3) <= 1e-10 * 3);
    CHECK(std::abs(f.C_M - 0.8) <= 1e-10);
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.points_used == 7);
    auto e = fit_exponential(planted(3, 0.8, kind), kind, FitTarget::Estimate);
    CHECK(std::abs(e.A_M - 12) <= 1e-10 * 12);
  }
}

TEST_CASE("fit filters ill-conditioned records and spikes") {
  auto rs = planted(2, 0.5, FitKind::InvH);
  rs[2].cond = 1e17;
  rs[2].true_error = 1e3;
  rs[4].true_error *= 1e3;  // spike under refinement
  SweepRecord failed;
  failed.failed = true;
  failed.h = 0.3;
  rs.push_back(failed);
  auto f = fit_exponential(rs, FitKind::InvH);
  CHECK(f.points_used == 5);
  CHECK(f.C_M == doctest::Approx(0.5).epsilon(1e-10));

  std::vector<SweepRecord> same(4);
  for (auto& r : same) {
    r.h = 0.1;
    r.true_error = 1e-3;
  }
  CHECK_THROWS_AS(fit_exponential(same, FitKind::InvH), std::invalid_argument);
  auto two = planted(1, 1, FitKind::InvH);
  two.resize(2);
  CHECK_THROWS_AS(fit_exponential(two, FitKind::InvH), std::invalid_argument);
}

TEST_CASE("epsilon selection") {
  std::vector<SweepRecord> rs{rec(3, 0.5, 0.4, 0.1), rec(4, 0.2, 0.3, 0.05), rec(5, 0.1, 0.35, 0.07),
                              rec(6, 0.3, 0.5, 0.2)};
  auto s = select_epsilon(rs);
  CHECK(s.eps_est == 5);
  CHECK(s.eps_res == 4);
  CHECK(s.eps_true == 4);
  CHECK(s.c_tilde == doctest::Approx(4.5 * std::sqrt(0.1)));
  CHECK_FALSE(s.edge_warning);

  for (auto& r : rs) r.estimate *= 37.5;
  CHECK(select_epsilon(rs).eps_est == 5);

  std::vector<SweepRecord> edge{rec(3, 0.1, 0.1), rec(4, 0.2, 0.2), rec(5, 0.3, 0.3)};
  CHECK(select_epsilon(edge).edge_warning);
  CHECK_THROWS(select_epsilon({rec(3, 1, 1), rec(4, 1, 1)}));
  auto dead = edge;
  for (auto& r : dead) r.failed = true;
  CHECK_THROWS(select_epsilon(dead));
}

TEST_CASE("shape strategy") {
  CHECK(eps_strategy(1.5, -0.5, 0.04) == doctest::Approx(7.5));
  CHECK(eps_strategy(2.0, 0.0, 0.3) == doctest::Approx(2.0));
  CHECK(eps_strategy(1.0, -1.0, 0.05) == doctest::Approx(2 * eps_strategy(1.0, -1.0, 0.1)));
  CHECK_THROWS(eps_strategy(0.0, -0.5, 0.1));
}

TEST_CASE("small shape parameter models") {
  CHECK(small_eps_model(ProblemKind::OneD, M_PI, 1.0 / 9, 10) == doctest::Approx(0.5 * std::pow(M_PI / 9, 9)));
  CHECK(small_eps_model(ProblemKind::OneD, M_PI, 1.0 / 9, 10) == doctest::Approx(4.1e-5).epsilon(0.02));
  CHECK(small_eps_model(ProblemKind::Rectangle, 1.2 * M_PI, 0.25, 25) == doctest::Approx(std::pow(0.3 * M_PI, 5)));
  CHECK(small_eps_model(ProblemKind::Rectangle, 1.2 * M_PI, 0.25, 25) == doctest::Approx(0.735).epsilon(0.01));
  CHECK_THROWS_AS(small_eps_model(ProblemKind::OneD, 10.0, 0.2, 6), std::domain_error);
}

TEST_CASE("small shape parameter error matches the model") {
  auto p = Problem::one_d(2 * M_PI);
  const int n = 12;
  auto nodes = nodes_interval(n);
  auto g = eval_grid(Interval{}, 200, 1);
  auto v = solve_evaluate_1d_extended(p, nodes, Kernel(KernelFamily::Multiquadric, 0.01), g.points);
  const double err = max_error(v, g.points, *analytic_solution(p));
  const double model = small_eps_model(ProblemKind::OneD, 2 * M_PI, nodes.step(), n);
  CHECK(err >= model / 10);
  CHECK(err <= model * 10);
}

TEST_CASE("grids") {
  auto d = default_eps_grid_1d();
  REQUIRE(d.size() == 9);
  CHECK(d.front() == doctest::Approx(std::pow(10, -2 + 4.0 / 9)));
  CHECK(d.back() == doctest::Approx(100));
  auto l = linear_grid(3, 0.3, 9);
  CHECK(l.size() == 21);
  CHECK(l.back() == doctest::Approx(9));
  CHECK_THROWS(linear_grid(3, 0, 9));
}

TEST_CASE("sweeps record one entry per pair") {
  auto p = Problem::one_d(2 * M_PI);
  auto one = sweep(p, {nodes_interval(12)}, KernelFamily::Multiquadric, {3.0}, truth_1d(p));
  REQUIRE(one.size() == 1);
  CHECK(one[0].n == 12);
  CHECK(one[0].true_error > 0);
  CHECK(one[0].estimate >= one[0].true_error);

  auto two = sweep(p, {nodes_interval(10), nodes_interval(14)}, KernelFamily::Gaussian, {1.0, 2.0, 3.0}, truth_1d(p));
  CHECK(two.size() == 6);
  CHECK_THROWS(sweep(p, {}, KernelFamily::Gaussian, {1.0}, nullptr));
}

TEST_CASE("error curves in the shape parameter are U-shaped") {
  auto p = Problem::one_d(2 * M_PI);
  const auto eps = default_eps_grid_1d();
  for (int n : {10, 14, 20}) {
    auto rs = sweep(p, {nodes_interval(n)}, KernelFamily::Multiquadric, eps, truth_1d(p));
    auto best = std::min_element(rs.begin(), rs.end(), [](auto& a, auto& b) {
      return (a.failed ? INFINITY : a.true_error) < (b.failed ? INFINITY : b.true_error);
    });
    CAPTURE(n);
    CHECK(best != rs.begin());
    CHECK(best != rs.end() - 1);
  }
}

TEST_CASE("refinement with a shrinking or fixed shape parameter converges") {
  auto p = Problem::one_d(2 * M_PI);
  std::vector<NodeSet> ladder;
  for (int n : {10, 20, 40, 80}) ladder.push_back(nodes_interval(n));
  for (auto [C, beta] : {std::pair{3.0, 0.0}, std::pair{1.0, -0.5}}) {
    auto rs = converge(p, ladder, KernelFamily::Multiquadric, C, beta, truth_1d(p));
    REQUIRE(rs.size() == 4);
    CHECK(rs[3].eps == doctest::Approx(eps_strategy(C, beta, ladder[3].step())));
    int rises = 0;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) rises += rs[i + 1].true_error > rs[i].true_error;
    CAPTURE(C);
    CAPTURE(beta);
    CHECK(rises <= 1);
    CHECK(rs.back().true_error < rs.front().true_error);
  }
}

TEST_CASE("stationary scaling stalls") {
  auto p = Problem::one_d(2 * M_PI);
  auto rs = converge(p, {nodes_interval(40), nodes_interval(80)}, KernelFamily::Multiquadric, 0.1, -1.0, truth_1d(p));
  CHECK(rs[1].true_error / rs[0].true_error > 0.5);
}

}
