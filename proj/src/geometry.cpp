#include "helmrbf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace helmrbf {

namespace {

constexpr double kSlopeStep = 1e-6;

double central_slope(const Waveguide::Curve& c, double x) {
  return (c(x + kSlopeStep) - c(x - kSlopeStep)) / (2 * kSlopeStep);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// x2 in [0, 1] with arc_length(curve, x2) == s.
double invert_arc_length(const Waveguide::Curve& curve, double s) {
  double lo = 0, hi = 1;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (arc_length(curve, mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Waveguide::Waveguide(Curve lower, Curve upper, std::string name)
    : lower_(std::move(lower)), upper_(std::move(upper)), name_(std::move(name)) {
  for (int i = 0; i <= 200; ++i) {
    const double x2 = i / 200.0;
    if (!(upper_(x2) > lower_(x2))) {
      throw std::invalid_argument("waveguide width must be positive on [0, 1]");
    }
  }
}

double Waveguide::lower_slope(double x2) const { return central_slope(lower_, x2); }
double Waveguide::upper_slope(double x2) const { return central_slope(upper_, x2); }

bool Waveguide::contains(const Point& p, double tol) const {
  if (p[1] < -tol || p[1] > 1 + tol) return false;
  const double x2 = std::clamp(p[1], 0.0, 1.0);
  return p[0] >= lower(x2) - tol && p[0] <= upper(x2) + tol;
}

Waveguide duct_m() {
  return Waveguide(
      [](double x2) { return 0.3 * std::exp(-20 * (x2 - 0.5) * (x2 - 0.5)); },
      [](double x2) {
        return 0.8 - 0.3 * (std::exp(-80 * (x2 - 0.3) * (x2 - 0.3)) +
                            std::exp(-80 * (x2 - 0.7) * (x2 - 0.7)));
      },
      "duct-m");
}

Waveguide straight_duct(double width) {
  return Waveguide([](double) { return 0.0; }, [width](double) { return width; }, "straight");
}

double arc_length(const Waveguide::Curve& curve, double s, int panels) {
  if (s <= 0) return 0;
  if (panels % 2) ++panels;
  const double h = s / panels;
  auto speed = [&](double x) {
    const double d = central_slope(curve, x);
    return std::sqrt(1 + d * d);
  };
  double acc = speed(0) + speed(s);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * speed(i * h);
  return acc * h / 3;
}

std::size_t NodeSet::count(int tag) const {
  return static_cast<std::size_t>(std::count(region.begin(), region.end(), tag));
}

double NodeSet::step() const {
  if (dim == 1) return 1.0 / (static_cast<double>(size()) - 1);
  return std::max(h1, h2);
}

double NodeSet::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]));
    }
  }
  return best;
}

NodeSet nodes_interval(int n) {
  if (n < 3) throw std::invalid_argument("interval node set needs N >= 3");
  NodeSet ns;
  ns.dim = 1;
  ns.n1 = n;
  ns.h1 = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    ns.points.push_back({i == n - 1 ? 1.0 : i * ns.h1, 0.0});
    ns.region.push_back(i == 0 ? kLeft : i == n - 1 ? kRight : kInterior);
  }
  return ns;
}

std::vector<int> rectangle_tags(const std::vector<Point>& points, double width, double tol) {
  std::vector<int> tags;
  tags.reserve(points.size());
  for (const auto& p : points) {
    if (std::abs(p[0]) <= tol || std::abs(p[0] - width) <= tol) {
      tags.push_back(kWall);
    } else if (std::abs(p[1]) <= tol) {
      tags.push_back(kLeft);
    } else if (std::abs(p[1] - 1) <= tol) {
      tags.push_back(kRight);
    } else {
      tags.push_back(kInterior);
    }
  }
  return tags;
}

NodeSet nodes_rectangle(int n1, int n2, double width) {
  if (n1 < 3 || n2 < 3) throw std::invalid_argument("rectangle node set needs n1, n2 >= 3");
  if (!(width > 0)) throw std::invalid_argument("rectangle width must be positive");
  NodeSet ns;
  ns.dim = 2;
  ns.n1 = n1;
  ns.n2 = n2;
  ns.h1 = width / (n1 - 1);
  ns.h2 = 1.0 / (n2 - 1);
  for (int j = 0; j < n2; ++j) {
    const double x2 = j == n2 - 1 ? 1.0 : j * ns.h2;
    for (int i = 0; i < n1; ++i) {
      const double x1 = i == n1 - 1 ? width : i * ns.h1;
      ns.points.push_back({x1, x2});
    }
  }
  ns.region = rectangle_tags(ns.points, width);
  return ns;
}

NodeSet nodes_waveguide(int n1, int n2, const Waveguide& guide, std::uint64_t seed) {
  if (n1 < 4 || n2 < 4) throw std::invalid_argument("waveguide node set needs n1, n2 >= 4");
  NodeSet ns;
  ns.dim = 2;
  ns.n1 = n1;
  ns.n2 = n2;
  ns.h1 = 0.8 / (n1 - 1);
  ns.h2 = 1.0 / (n2 - 1);
  ns.seed = seed;
  Xorshift64 rng(seed);

  const double margin = 0.3 * std::min(ns.h1, ns.h2);
  auto clear_of_walls = [&](const Point& p) {
    if (p[1] <= 0 || p[1] >= 1) return false;
    const double lo = guide.lower(p[1]);
    const double hi = guide.upper(p[1]);
    const double sl = guide.lower_slope(p[1]);
    const double su = guide.upper_slope(p[1]);
    return (p[0] - lo) / std::sqrt(1 + sl * sl) >= margin &&
           (hi - p[0]) / std::sqrt(1 + su * su) >= margin;
  };

  // Vertical lines x2 = j*h2; their end points belong to the walls below.
  for (int j = 0; j < n2; ++j) {
    const double x2 = j == n2 - 1 ? 1.0 : j * ns.h2;
    const double lo = guide.lower(x2);
    const double w = guide.width(x2);
    const int count = std::max(2, static_cast<int>(std::lround(w / ns.h1)) + 1);
    const double spacing = w / (count - 1);
    for (int k = 1; k + 1 < count; ++k) {
      const double x1 = lo + k * spacing;
      if (j == 0 || j == n2 - 1) {
        ns.points.push_back({x1 + 0.25 * spacing * rng.symmetric(), x2});
        ns.region.push_back(j == 0 ? kLeft : kRight);
        continue;
      }
      Point p{x1, x2};
      for (int attempt = 0; attempt < 50; ++attempt) {
        const double d1 = 0.25 * ns.h1 * rng.symmetric();
        const double d2 = 0.25 * ns.h2 * rng.symmetric();
        const Point q{x1 + d1, x2 + d2};
        if (clear_of_walls(q)) {
          p = q;
          break;
        }
      }
      ns.points.push_back(p);
      ns.region.push_back(kInterior);
    }
  }

  // Curved walls at uniform arc length, corners included and left in place.
  for (const auto& curve : {Waveguide::Curve([&](double s) { return guide.lower(s); }),
                            Waveguide::Curve([&](double s) { return guide.upper(s); })}) {
    const double total = arc_length(curve, 1.0);
    const int segments = std::max(1, static_cast<int>(std::lround(total / ns.h2)));
    const double ds = total / segments;
    for (int k = 0; k <= segments; ++k) {
      double x2 = 0;
      if (k == segments) {
        x2 = 1;
      } else if (k > 0) {
        x2 = invert_arc_length(curve, k * ds + 0.25 * ds * rng.symmetric());
      }
      ns.points.push_back({curve(x2), x2});
      ns.region.push_back(kWall);
    }
  }
  return ns;
}

NodeSet nodes_from_points(int dim, std::vector<Point> points, std::vector<int> region) {
  if (points.size() != region.size()) {
    throw std::invalid_argument("node set: point and tag counts differ");
  }
  for (int tag : region) {
    if (tag < kInterior || tag > kWall) throw std::invalid_argument("node set: tag out of range");
  }
  NodeSet ns;
  ns.dim = dim;
  ns.points = std::move(points);
  ns.region = std::move(region);
  const double n = static_cast<double>(ns.points.size());
  if (dim == 1) {
    ns.h1 = 1.0 / (n - 1);
  } else {
    ns.h1 = ns.h2 = 1.0 / (std::sqrt(n) - 1);
  }
  return ns;
}

std::vector<Point> EvalGrid::interior_points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!on_boundary[i]) out.push_back(points[i]);
  }
  return out;
}

EvalGrid eval_grid(const Domain& domain, int m1, int m2) {
  if (m1 < 2) throw std::invalid_argument("evaluation grid needs m1 >= 2");
  EvalGrid g;
  g.m1 = m1;
  if (std::holds_alternative<Interval>(domain)) {
    g.dim = 1;
    g.m2 = 1;
    for (int i = 0; i < m1; ++i) {
      g.points.push_back({i == m1 - 1 ? 1.0 : static_cast<double>(i) / (m1 - 1), 0.0});
      g.on_boundary.push_back(i == 0 || i == m1 - 1);
    }
    return g;
  }
  if (m2 < 2) throw std::invalid_argument("evaluation grid needs m2 >= 2");
  g.dim = 2;
  g.m2 = m2;
  for (int j = 0; j < m2; ++j) {
    const double x2 = j == m2 - 1 ? 1.0 : static_cast<double>(j) / (m2 - 1);
    double lo = 0, hi = 0;
    if (const auto* r = std::get_if<Rectangle>(&domain)) {
      hi = r->width;
    } else {
      const auto& w = std::get<Waveguide>(domain);
      lo = w.lower(x2);
      hi = w.upper(x2);
    }
    for (int i = 0; i < m1; ++i) {
      const double x1 = i == m1 - 1 ? hi : lo + (hi - lo) * i / (m1 - 1);
      g.points.push_back({x1, x2});
      g.on_boundary.push_back(i == 0 || i == m1 - 1 || j == 0 || j == m2 - 1);
    }
  }
  return g;
}

Xorshift64::Xorshift64(std::uint64_t seed) : state_(splitmix64(seed)) {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Xorshift64::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double Xorshift64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace helmrbf
