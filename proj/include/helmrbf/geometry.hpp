#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace helmrbf {

// (x1, x2): x1 is the cross-section coordinate, x2 runs along the guide.
// One-dimensional sets store their coordinate in x1 and keep x2 = 0.
using Point = std::array<double, 2>;

struct Interval {};

struct Rectangle {
  double width = 1.0;  // L1, the cross-section; the length along x2 is 1
};

// Duct gamma1(x2) < x1 < gamma2(x2), x2 in [0, 1].
class Waveguide {
 public:
  using Curve = std::function<double(double)>;

  Waveguide(Curve lower, Curve upper, std::string name = "custom");

  double lower(double x2) const { return lower_(x2); }
  double upper(double x2) const { return upper_(x2); }
  double width(double x2) const { return upper_(x2) - lower_(x2); }
  // Central difference slope, step 1e-6.
  double lower_slope(double x2) const;
  double upper_slope(double x2) const;
  const std::string& name() const { return name_; }

  bool contains(const Point& p, double tol = 0) const;

 private:
  Curve lower_;
  Curve upper_;
  std::string name_;
};

// The M-shaped duct used throughout the experiments.
Waveguide duct_m();
// Straight guide gamma1 = 0, gamma2 = width; coincides with a Rectangle.
Waveguide straight_duct(double width);

using Domain = std::variant<Interval, Rectangle, Waveguide>;

// Region tags follow the operator order of the model problems.
enum Region : int {
  kInterior = 1,
  kLeft = 2,   // x = 0 (1D) or x2 = 0
  kRight = 3,  // x = 1 (1D) or x2 = 1
  kWall = 4,   // Dirichlet segments
};

struct NodeSet {
  int dim = 1;
  std::vector<Point> points;
  std::vector<int> region;
  int n1 = 0;
  int n2 = 0;
  double h1 = 0;
  double h2 = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  std::size_t count(int tag) const;
  // Fill-distance proxy: 1/(N-1) in 1D, max(h1, h2) in 2D.
  double step() const;
  double min_separation() const;
};

NodeSet nodes_interval(int n);
NodeSet nodes_rectangle(int n1, int n2, double width);
NodeSet nodes_waveguide(int n1, int n2, const Waveguide& guide, std::uint64_t seed);

// Generic constructor for fixtures read from files: tags must be 1..4.
NodeSet nodes_from_points(int dim, std::vector<Point> points, std::vector<int> region);

// Tag points of a unit-height rectangle by the standard rule: x1 on {0, L1}
// is a wall (corners included), then x2 = 0 left, x2 = 1 right, else interior.
std::vector<int> rectangle_tags(const std::vector<Point>& points, double width, double tol = 1e-14);

struct EvalGrid {
  int dim = 1;
  int m1 = 0;
  int m2 = 0;
  std::vector<Point> points;
  std::vector<bool> on_boundary;

  std::size_t size() const { return points.size(); }
  std::vector<Point> interior_points() const;
};

EvalGrid eval_grid(const Domain& domain, int m1, int m2);

// xorshift64* seeded through splitmix64. Fixed arithmetic, so node sets are
// identical on every platform.
class Xorshift64 {
 public:
  explicit Xorshift64(std::uint64_t seed);
  std::uint64_t next();
  // Uniform on [0, 1).
  double uniform();
  // Uniform on [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

// Arc length of x1 = curve(x2) between x2 = 0 and x2 = s (composite Simpson).
double arc_length(const Waveguide::Curve& curve, double s, int panels = 400);

}  // namespace helmrbf
