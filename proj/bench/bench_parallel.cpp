// Serial reference kernels against their OpenMP counterparts: LU
// factorization, DtN assembly and grid evaluation.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "helmrbf/collocation.hpp"

using namespace helmrbf;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* what, double serial, double parallel) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", what, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int n1 = argc > 1 ? std::atoi(argv[1]) : 30;
  const int n2 = argc > 2 ? std::atoi(argv[2]) : 37;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 3;
  std::printf("threads: %d, node set %dx%d, best of %d\n", thread_count(), n1, n2, reps);

  const Problem prob = Problem::duct(6 * M_PI, duct_m());
  const NodeSet nodes = nodes_waveguide(n1, n2, duct_m(), 1);
  const Kernel kernel(KernelFamily::Multiquadric, 1.5 / std::sqrt(nodes.step()));
  std::printf("N = %zu\n", nodes.size());

  Assembly as;
  const double asm_s = best_of(reps, [&] { as = assemble_nonsymmetric(prob, nodes, kernel, Exec::Serial); });
  const double asm_p = best_of(reps, [&] { as = assemble_nonsymmetric(prob, nodes, kernel, Exec::Parallel); });
  report("assembly (DtN rows)", asm_s, asm_p);

  const double lu_s = best_of(reps, [&] { lu_factor(as.matrix, Exec::Serial); });
  const double lu_p = best_of(reps, [&] { lu_factor(as.matrix, Exec::Parallel); });
  report("LU factorization", lu_s, lu_p);

  SolveOptions so;
  so.estimate_condition = false;
  const Solution sol = solve(prob, nodes, kernel, so);
  const EvalGrid grid = eval_grid(prob.domain, 100, 100);
  const double ev_s = best_of(reps, [&] { evaluate(sol.approx, grid.points, Exec::Serial); });
  const double ev_p = best_of(reps, [&] { evaluate(sol.approx, grid.points, Exec::Parallel); });
  report("evaluation (100x100 grid)", ev_s, ev_p);
  return 0;
}
