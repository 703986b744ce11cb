#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helmrbf/geometry.hpp"

using namespace helmrbf;

TEST_SUITE("geometry") {

TEST_CASE("interval nodes") {
  auto n = nodes_interval(5);
  REQUIRE(n.size() == 5);
  const double xs[] = {0, 0.25, 0.5, 0.75, 1};
  const int tags[] = {kLeft, kInterior, kInterior, kInterior, kRight};
  for (int i = 0; i < 5; ++i) {
    CHECK(n.points[i][0] == doctest::Approx(xs[i]).epsilon(1e-15));
    CHECK(n.points[i][1] == 0.0);
    CHECK(n.region[i] == tags[i]);
  }
  auto n3 = nodes_interval(3);
  CHECK(n3.points[1][0] == doctest::Approx(0.5));
  CHECK(n3.step() == doctest::Approx(0.5));
  CHECK_THROWS_AS(nodes_interval(2), std::invalid_argument);
}

TEST_CASE("rectangle nodes") {
  auto a = nodes_rectangle(3, 3, 1.0);
  CHECK(a.size() == 9);
  CHECK(a.count(kInterior) == 1);
  auto b = nodes_rectangle(4, 5, 1.0);
  CHECK(b.size() == 20);
  CHECK(b.count(kInterior) == 6);
  // Corners belong to the walls.
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& p = b.points[i];
    if (p[0] == 0.0 || p[0] == 1.0) CHECK(b.region[i] == kWall);
  }
  CHECK(b.count(kLeft) == 2);
  CHECK(b.count(kRight) == 2);
  CHECK_THROWS_AS(nodes_rectangle(3, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(nodes_rectangle(3, 3, 0.0), std::invalid_argument);
}

TEST_CASE("rectangle tagging rule") {
  std::vector<Point> pts = {{0, 0}, {0.5, 0}, {0.5, 1}, {2, 0.5}, {1, 0.5}};
  auto tags = rectangle_tags(pts, 2.0);
  CHECK(tags == std::vector<int>{kWall, kLeft, kRight, kWall, kInterior});
}

TEST_CASE("waveguide node counts against the size table") {
  const auto guide = duct_m();
  struct Row {
    int n1, n2;
    std::size_t n;
  };
  for (auto r : {Row{10, 12, 104}, Row{20, 25, 396}, Row{40, 50, 1493}}) {
    auto ns = nodes_waveguide(r.n1, r.n2, guide, 1);
    CAPTURE(r.n1);
    CHECK(std::abs(double(ns.size()) - double(r.n)) <= 0.1 * r.n);
  }
}

TEST_CASE("waveguide node invariants") {
  const auto guide = duct_m();
  for (std::uint64_t seed : {1, 2, 7}) {
    auto ns = nodes_waveguide(14, 17, guide, seed);
    CHECK(ns.h1 == doctest::Approx(0.8 / 13));
    CHECK(ns.h2 == doctest::Approx(1.0 / 16));
    CHECK(ns.min_separation() >= 0.25 * std::min(ns.h1, ns.h2));
    REQUIRE(ns.region.size() == ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto& p = ns.points[i];
      const int t = ns.region[i];
      CHECK(t >= kInterior);
      CHECK(t <= kWall);
      if (t == kLeft) CHECK(p[1] == 0.0);
      if (t == kRight) CHECK(p[1] == 1.0);
      if (t == kWall) {
        const double d = std::min(std::abs(p[0] - guide.lower(p[1])), std::abs(p[0] - guide.upper(p[1])));
        CHECK(d <= 1e-12);
      }
      CHECK(guide.contains(p, 1e-12));
    }
    CHECK(ns.count(kLeft) >= 2);
    CHECK(ns.count(kRight) >= 2);
  }
}

TEST_CASE("waveguide nodes are deterministic") {
  const auto guide = duct_m();
  auto a = nodes_waveguide(12, 15, guide, 42);
  auto b = nodes_waveguide(12, 15, guide, 42);
  auto c = nodes_waveguide(12, 15, guide, 43);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) same = same && a.points[i] == b.points[i] && a.region[i] == b.region[i];
  CHECK(same);
  bool differs = a.size() != c.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a.points[i] != c.points[i];
  CHECK(differs);
}

TEST_CASE("straight waveguide matches rectangle geometry") {
  auto g = straight_duct(1.0);
  CHECK(g.lower(0.3) == 0.0);
  CHECK(g.upper(0.3) == 1.0);
  CHECK(g.width(0.9) == 1.0);
  CHECK(g.lower_slope(0.5) == doctest::Approx(0.0));
  CHECK_THROWS(Waveguide([](double) { return 0.5; }, [](double) { return 0.4; }));
}

TEST_CASE("duct boundary curves") {
  auto g = duct_m();
  CHECK(g.lower(0.5) == doctest::Approx(0.3));
  CHECK(g.upper(0.3) == doctest::Approx(0.8 - 0.3 * (1 + std::exp(-80 * 0.16))));
  CHECK(g.lower_slope(0.4) == doctest::Approx(0.3 * std::exp(-0.2) * 4).epsilon(1e-6));
}

TEST_CASE("evaluation grids") {
  auto gi = eval_grid(Interval{}, 60, 1);
  CHECK(gi.size() == 60);
  CHECK(gi.points.front()[0] == 0.0);
  CHECK(gi.points.back()[0] == doctest::Approx(1.0));
  auto gr = eval_grid(Rectangle{1.0}, 2, 2);
  REQUIRE(gr.size() == 4);
  std::set<std::pair<double, double>> corners;
  for (auto& p : gr.points) corners.insert({p[0], p[1]});
  CHECK(corners == std::set<std::pair<double, double>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  auto guide = duct_m();
  auto gw = eval_grid(guide, 60, 60);
  CHECK(gw.size() == 3600);
  for (auto& p : gw.points) CHECK(guide.contains(p, 1e-12));
  CHECK(gw.interior_points().size() == 58u * 58u);
  CHECK_THROWS(eval_grid(Interval{}, 1, 1));
}

TEST_CASE("xorshift generator") {
  Xorshift64 a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Xorshift64 c(9);
  double lo = 1, hi = -1, mean = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = c.symmetric();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
  }
  CHECK(lo >= -1.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(mean / 10000) < 0.05);
}

TEST_CASE("arc length") {
  CHECK(arc_length([](double) { return 0.2; }, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(arc_length([](double s) { return s; }, 0.5) == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("fixture node sets validate tags") {
  CHECK_THROWS(nodes_from_points(2, {{0, 0}}, {5}));
  CHECK_THROWS(nodes_from_points(2, {{0, 0}, {1, 1}}, {1}));
  auto ns = nodes_from_points(2, {{0, 0}, {1, 1}}, {kWall, kInterior});
  CHECK(ns.size() == 2);
}

}
