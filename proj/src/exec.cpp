#include "helmrbf/exec.hpp"

#include <omp.h>

#include <cstdlib>

namespace helmrbf {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("HELMRBF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

int& current_threads() {
  static int n = [] {
    const int t = initial_threads();
    omp_set_num_threads(t);
    return t;
  }();
  return n;
}

}  // namespace

int thread_count() { return current_threads(); }

void set_thread_count(int n) {
  if (n < 1) n = 1;
  current_threads() = n;
  omp_set_num_threads(n);
}

}  // namespace helmrbf
