#include "helmrbf/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helmrbf/errorest.hpp"
#include "helmrbf/stats.hpp"

namespace helmrbf {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view field, std::string_view text) {
  text = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

long long to_integer(std::string_view field, std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(std::string(field), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

int to_int(std::string_view field, std::string_view text) {
  const long long v = to_integer(field, text);
  if (v < -1000000000LL || v > 1000000000LL) throw ValidationError(std::string(field), "out of range");
  return static_cast<int>(v);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double geometric_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::log(x);
  return std::exp(s / static_cast<double>(v.size()));
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  if (k == "problem") {
    problem = value;
  } else if (k == "kappa") {
    kappa = to_double(k, value);
  } else if (k == "kappa-im") {
    kappa_im = to_double(k, value);
  } else if (k == "m") {
    mode = to_int(k, value);
  } else if (k == "xs") {
    xs = to_double(k, value);
  } else if (k == "width") {
    width = to_double(k, value);
  } else if (k == "domain") {
    domain = value;
  } else if (k == "kernel") {
    kernel = value;
  } else if (k == "eps") {
    eps = to_double(k, value);
  } else if (k == "c") {
    c = to_double(k, value);
  } else if (k == "beta") {
    beta = to_double(k, value);
  } else if (k == "n1") {
    n1 = to_int(k, value);
  } else if (k == "n2") {
    n2 = to_int(k, value);
  } else if (k == "seed") {
    const long long s = to_integer(k, value);
    if (s < 0) throw ValidationError(k, "must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  } else if (k == "quad-tol") {
    quad_tol = to_double(k, value);
  } else if (k == "grid") {
    std::tie(grid1, grid2) = parse_grid(value);
  } else if (k == "out") {
    out = value;
  } else if (k == "plot") {
    plot = value;
  } else {
    throw ValidationError(k, "unknown configuration key");
  }
}

void RunConfig::validate() const {
  if (problem != "1d" && problem != "rect" && problem != "duct") {
    throw ValidationError("problem", "expected 1d | rect | duct, got '" + problem + "'");
  }
  if (!(kappa > 0) || !std::isfinite(kappa)) throw ValidationError("kappa", "must be positive");
  if (!std::isfinite(kappa_im) || kappa_im < 0) throw ValidationError("kappa-im", "must be nonnegative");
  if (mode < 1) throw ValidationError("m", "mode index must be >= 1");
  if (!(width > 0)) throw ValidationError("width", "must be positive");
  if (domain != "duct-m" && domain != "straight") {
    throw ValidationError("domain", "expected duct-m | straight, got '" + domain + "'");
  }
  try {
    parse_kernel_family(kernel);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("kernel", e.what());
  }
  const bool strategy = c.has_value() || beta.has_value();
  if (eps && strategy) throw ValidationError("eps", "give either eps or the strategy c, beta, not both");
  if (!eps && !strategy) throw ValidationError("eps", "set eps or the strategy c, beta");
  if (eps && !(*eps > 0)) throw ValidationError("eps", "must be positive");
  if (strategy && !(c && beta)) throw ValidationError(c ? "beta" : "c", "strategy needs both c and beta");
  if (c && !(*c > 0)) throw ValidationError("c", "must be positive");
  const int min_n = problem == "1d" ? 2 : 3;
  if (n1 < min_n) throw ValidationError("n1", "must be at least " + std::to_string(min_n));
  if (n2 != 0 && n2 < 3) throw ValidationError("n2", "must be at least 3");
  if (!(quad_tol > 0)) throw ValidationError("quad-tol", "must be positive");
  if (grid1 < 2 || grid2 < 2) throw ValidationError("grid", "needs at least 2 points per direction");
  try {
    make_problem().validate();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ValidationError(colon == std::string::npos ? "problem" : msg.substr(0, colon),
                          colon == std::string::npos ? msg : std::string(trim(msg.substr(colon + 1))));
  }
}

Problem RunConfig::make_problem() const {
  const cplx k(kappa, kappa_im);
  Problem p;
  if (problem == "1d") {
    p = Problem::one_d(k);
  } else if (problem == "rect") {
    p = Problem::rectangle(k, mode, width);
  } else {
    p = Problem::duct(k, domain == "straight" ? straight_duct(width) : duct_m(), xs);
  }
  p.quad_tol = quad_tol;
  return p;
}

NodeSet RunConfig::make_nodes() const {
  const int m2 = n2 > 0 ? n2 : n1;
  if (problem == "1d") return nodes_interval(n1);
  if (problem == "rect") return nodes_rectangle(n1, m2, width);
  return nodes_waveguide(n1, m2, domain == "straight" ? straight_duct(width) : duct_m(), seed);
}

double RunConfig::shape_for(double h) const {
  if (eps) return *eps;
  return eps_strategy(c.value_or(1.0), beta.value_or(0.0), h);
}

Kernel RunConfig::make_kernel(double h) const { return Kernel(parse_kernel_family(kernel), shape_for(h)); }

EvalGrid RunConfig::make_grid() const { return eval_grid(make_problem().domain, grid1, grid2); }

RunConfig parse_config(std::string_view text, RunConfig base) {
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config", "line " + std::to_string(line_no) + " is not key = value");
    }
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::pair<int, int> parse_grid(std::string_view text) {
  text = trim(text);
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    const int m = to_int("grid", text);
    return {m, m};
  }
  return {to_int("grid", text.substr(0, x)), to_int("grid", text.substr(x + 1))};
}

std::vector<double> parse_range(std::string_view text) {
  text = trim(text);
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("range", "expected lo:step:hi");
    const double lo = to_double("range", parts[0]);
    const double step = to_double("range", parts[1]);
    const double hi = to_double("range", parts[2]);
    if (!(step > 0) || hi < lo) throw ValidationError("range", "need step > 0 and hi >= lo");
    return linear_grid(lo, step, hi);
  }
  std::vector<double> out;
  for (auto p : split(text, ',')) out.push_back(to_double("range", p));
  if (out.empty()) throw ValidationError("range", "empty list");
  return out;
}

std::vector<std::pair<int, int>> parse_ladder(std::string_view text) {
  std::vector<std::pair<int, int>> out;
  for (auto p : split(text, ',')) {
    const auto x = p.find('x');
    if (x == std::string_view::npos) throw ValidationError("ladder", "expected n1xn2, got '" + std::string(p) + "'");
    out.emplace_back(to_int("ladder", p.substr(0, x)), to_int("ladder", p.substr(x + 1)));
  }
  return out;
}

std::string problem_key(const Problem& problem) {
  std::string key;
  switch (problem.kind) {
    case ProblemKind::OneD:
      key = "1d";
      break;
    case ProblemKind::Rectangle:
      key = "rect/w=" + format_number(std::get<Rectangle>(problem.domain).width) + "/m=" +
            std::to_string(problem.mode);
      break;
    case ProblemKind::Duct:
      key = "duct/" + std::get<Waveguide>(problem.domain).name() + "/xs=" + format_number(problem.xs);
      break;
  }
  return key + "/k=" + format_number(problem.kappa.real()) + "," + format_number(problem.kappa.imag());
}

GridSolution sample(const Problem& problem, const Approximant& approx, const EvalGrid& grid) {
  return {problem_key(problem), grid.points, evaluate(approx, grid.points)};
}

double reference_compare(const GridSolution& coarse, const GridSolution& fine) {
  if (coarse.problem_key != fine.problem_key) {
    throw ValidationError("reference", "runs solve different problems (" + coarse.problem_key + " vs " +
                                           fine.problem_key + ")");
  }
  if (coarse.points != fine.points || coarse.values.size() != fine.values.size()) {
    throw ValidationError("reference", "runs use different evaluation grids");
  }
  double diff = 0;
  for (std::size_t i = 0; i < fine.values.size(); ++i) diff = std::max(diff, std::abs(coarse.values[i] - fine.values[i]));
  const double scale = max_abs(fine.values);
  if (!(scale > 0)) throw ValidationError("reference", "reference solution vanishes on the grid");
  return diff / scale;
}

double project_error(const std::vector<LadderPoint>& coarse, double finest_estimate) {
  if (coarse.empty()) throw ValidationError("ladder", "need at least one coarse run");
  if (!(finest_estimate >= 0)) throw ValidationError("estimate", "finest run has no estimate");
  double best = INFINITY;
  for (const auto& p : coarse) {
    if (!(p.estimate > 0)) throw ValidationError("estimate", "coarse run is missing its estimate");
    if (!(p.error > 0)) throw ValidationError("error", "coarse run is missing its reference error");
    best = std::min(best, p.estimate / p.error);
  }
  return finest_estimate / best;
}

GridSolution duct_reference(const Problem& problem, int n1, int n2, double C, double beta, std::uint64_t seed,
                            int grid, Exec exec) {
  const auto& guide = std::get<Waveguide>(problem.domain);
  const NodeSet nodes = nodes_waveguide(n1, n2, guide, seed);
  SolveOptions so;
  so.exec = exec;
  so.estimate_condition = false;
  const Solution sol = solve(problem, nodes, Kernel(KernelFamily::Multiquadric, eps_strategy(C, beta, nodes.step())), so);
  return sample(problem, sol.approx, eval_grid(problem.domain, grid, grid));
}

std::vector<SweepRecord> duct_sweep_averaged(const Problem& problem, int n1, int n2,
                                             const std::vector<double>& eps_list, int seeds,
                                             const GridSolution& reference, const SweepOptions& opt) {
  if (seeds < 1) throw ValidationError("seeds", "must be at least 1");
  const auto& guide = std::get<Waveguide>(problem.domain);
  const EvalGrid grid = eval_grid(problem.domain, opt.grid, opt.grid);
  const std::string key = problem_key(problem);
  TruthFn truth = [&](const Approximant& a) {
    return reference_compare({key, grid.points, evaluate(a, grid.points, opt.exec)}, reference);
  };
  std::vector<std::vector<SweepRecord>> runs;
  for (int s = 1; s <= seeds; ++s) {
    runs.push_back(sweep(problem, {nodes_waveguide(n1, n2, guide, static_cast<std::uint64_t>(s))},
                         KernelFamily::Multiquadric, eps_list, truth, opt));
  }
  std::vector<SweepRecord> out = runs.front();
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto combine = [&](double SweepRecord::*field) {
      std::vector<double> v;
      for (const auto& r : runs) {
        if (r[i].failed || !(r[i].*field > 0)) return -1.0;
        v.push_back(r[i].*field);
      }
      return geometric_mean(v);
    };
    SweepRecord& rec = out[i];
    rec.true_error = combine(&SweepRecord::true_error);
    rec.estimate = combine(&SweepRecord::estimate);
    rec.residual_l2 = combine(&SweepRecord::residual_l2);
    rec.cond = combine(&SweepRecord::cond);
    rec.failed = false;
    rec.flags.clear();
    for (const auto& r : runs) {
      rec.failed = rec.failed || r[i].failed;
      rec.flags += r[i].flags;
    }
  }
  return out;
}

LadderStudy duct_ladder_study(const Problem& problem, const std::vector<std::pair<int, int>>& sizes,
                              double C, double beta, int seeds, int grid_size, Exec exec) {
  if (sizes.size() < 3) throw ValidationError("ladder", "need at least 3 rungs");
  if (seeds < 1) throw ValidationError("seeds", "must be at least 1");
  const auto& guide = std::get<Waveguide>(problem.domain);
  const EvalGrid grid = eval_grid(problem.domain, grid_size, grid_size);
  const std::size_t rungs = sizes.size();

  std::vector<std::vector<double>> err(rungs - 1), est(rungs), res(rungs);
  std::vector<double> h(rungs);
  for (int s = 1; s <= seeds; ++s) {
    std::vector<std::vector<cplx>> values(rungs);
    for (std::size_t r = 0; r < rungs; ++r) {
      const NodeSet nodes = nodes_waveguide(sizes[r].first, sizes[r].second, guide, static_cast<std::uint64_t>(s));
      h[r] = nodes.step();
      SolveOptions so;
      so.exec = exec;
      so.estimate_condition = false;
      const Solution sol =
          solve(problem, nodes, Kernel(KernelFamily::Multiquadric, eps_strategy(C, beta, h[r])), so);
      values[r] = evaluate(sol.approx, grid.points, exec);
      est[r].push_back(estimate_duct(sol.approx, problem).estimate);
      res[r].push_back(residual_norms(sol.approx, problem, grid).l2);
    }
    const double scale = max_abs(values.back());
    for (std::size_t r = 0; r + 1 < rungs; ++r) {
      double d = 0;
      for (std::size_t k = 0; k < grid.size(); ++k) d = std::max(d, std::abs(values[r][k] - values.back()[k]));
      err[r].push_back(d / scale);
    }
    for (std::size_t r = 0; r < rungs; ++r) est[r].back() /= scale;
  }

  LadderStudy out;
  out.sizes = sizes;
  out.h = h;
  for (const auto& e : err) out.error.push_back(geometric_mean(e));
  for (const auto& e : est) out.estimate.push_back(geometric_mean(e));
  for (const auto& e : res) out.residual_l2.push_back(geometric_mean(e));

  std::vector<double> x, ye, ys;
  for (std::size_t r = 0; r < rungs; ++r) {
    x.push_back(1.0 / std::sqrt(h[r]));
    ys.push_back(std::log(out.estimate[r]));
    if (r + 1 < rungs) ye.push_back(std::log(out.error[r]));
  }
  const LineFit fe = fit_line(std::vector<double>(x.begin(), x.end() - 1), ye);
  const LineFit fs = fit_line(x, ys);
  out.C_err = -fe.slope;
  out.A_err = std::exp(fe.intercept);
  out.r2_err = fe.r2;
  out.C_est = -fs.slope;
  out.A_est = std::exp(fs.intercept);
  out.r2_est = fs.r2;
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::invalid_argument("CsvTable: row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string s;
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += ',';
      s += r[i];
    }
    s += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return s;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace helmrbf
