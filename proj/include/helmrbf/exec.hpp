#pragma once

#include <complex>

namespace helmrbf {

using cplx = std::complex<double>;

// Selects between the OpenMP kernels and the serial reference versions kept
// for cross-checking. Both produce the same result up to rounding order.
enum class Exec { Serial, Parallel };

// Thread count used by the parallel kernels. Honors HELMRBF_THREADS when set.
int thread_count();
void set_thread_count(int n);

}  // namespace helmrbf
