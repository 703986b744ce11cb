#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "helmrbf/collocation.hpp"
#include "helmrbf/shapeconv.hpp"

namespace helmrbf {

// Bad user input. The message names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string problem = "1d";      // 1d | rect | duct
  double kappa = 2 * M_PI;
  double kappa_im = 0;
  int mode = 1;
  double xs = 0.3;
  double width = 1.0;              // rectangle cross-section
  std::string domain = "duct-m";   // duct-m | straight
  std::string kernel = "mq";
  std::optional<double> eps;       // fixed shape parameter, or
  std::optional<double> c;         // eps = c h^beta
  std::optional<double> beta;
  int n1 = 20;
  int n2 = 0;                      // 0: same as n1
  std::uint64_t seed = 1;
  double quad_tol = 1e-12;
  int grid1 = 60;
  int grid2 = 60;
  std::string out;
  std::string plot;

  // Keys match the long flag names without dashes, e.g. "quad-tol", "grid".
  void set(std::string_view key, std::string_view value);
  void validate() const;

  Problem make_problem() const;
  NodeSet make_nodes() const;
  Kernel make_kernel(double h) const;
  double shape_for(double h) const;
  EvalGrid make_grid() const;
};

// Flat "key = value" text; '#' starts a comment.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Parses "m1xm2" or "m".
std::pair<int, int> parse_grid(std::string_view text);
// "a:step:b" or a comma separated list.
std::vector<double> parse_range(std::string_view text);
// "10x12,14x17" -> {{10, 12}, {14, 17}}.
std::vector<std::pair<int, int>> parse_ladder(std::string_view text);

// Samples of one solution on an evaluation grid, tagged with the problem
// they solve so that mismatched comparisons are caught.
struct GridSolution {
  std::string problem_key;
  std::vector<Point> points;
  std::vector<cplx> values;
};
std::string problem_key(const Problem& problem);
GridSolution sample(const Problem& problem, const Approximant& approx, const EvalGrid& grid);

// |s_coarse - s_fine|_inf / |s_fine|_inf. Throws ValidationError when the runs
// solve different problems or use different grids.
double reference_compare(const GridSolution& coarse, const GridSolution& fine);

struct LadderPoint {
  double estimate = -1;
  double error = -1;
};
// Adjusted estimate for the finest run: its estimate divided by the smallest
// estimate/error ratio seen on the coarser runs.
double project_error(const std::vector<LadderPoint>& coarse, double finest_estimate);

// Reference solution of a duct problem with eps = C h^beta on an n1 x n2 set.
GridSolution duct_reference(const Problem& problem, int n1, int n2, double C, double beta, std::uint64_t seed,
                            int grid = 60, Exec exec = Exec::Parallel);

// eps sweep on n1 x n2 sets for seeds 1..seeds, true errors relative to the
// reference. Records are combined by geometric means over seeds.
std::vector<SweepRecord> duct_sweep_averaged(const Problem& problem, int n1, int n2,
                                             const std::vector<double>& eps_list, int seeds,
                                             const GridSolution& reference, const SweepOptions& opt = {});

// Refinement study on a duct problem with eps = C h^beta. Errors are measured
// against the finest rung of the same seed and divided by its max norm; errors,
// estimates and residual norms are geometric means over seeds 1..seeds.
// The error fit uses the coarse rungs, the estimate fit every rung.
struct LadderStudy {
  std::vector<std::pair<int, int>> sizes;
  std::vector<double> h;
  std::vector<double> error;     // one entry per coarse rung
  std::vector<double> estimate;  // one entry per rung
  std::vector<double> residual_l2;
  double C_err = 0, A_err = 0, r2_err = 0;
  double C_est = 0, A_est = 0, r2_est = 0;
};
LadderStudy duct_ladder_study(const Problem& problem, const std::vector<std::pair<int, int>>& sizes,
                              double C, double beta, int seeds, int grid = 60, Exec exec = Exec::Parallel);

// Shortest round-trip decimal formatting ("%.17g").
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string str() const;
};

// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;
  bool line = false;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = true;
  std::vector<PlotSeries> series;
  std::vector<std::string> notes;
};

// Standalone SVG document. Throws ValidationError when there is nothing to draw.
std::string render_svg(const PlotSpec& spec);

// Named reproduction recipes. Each returns the tables it produced; the plot
// is filled in when the recipe has one.
struct RecipeOptions {
  int column = 0;                   // table3: 1-based column, 0 for all
  std::string kernel = "mq";
  double eps = 5;                   // fig2
  int seeds = 1;                    // table3, fig8
  Exec exec = Exec::Parallel;
};

struct RecipeOutput {
  CsvTable table;
  std::optional<PlotSpec> plot;
  std::vector<std::string> summary;
};

std::vector<std::string> recipe_names();
RecipeOutput run_recipe(const std::string& name, const RecipeOptions& options);

}  // namespace helmrbf
