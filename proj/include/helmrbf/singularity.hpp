#pragma once

#include <vector>

#include "helmrbf/geometry.hpp"
#include "helmrbf/kernels.hpp"
#include "helmrbf/linalg.hpp"

namespace helmrbf {

// M(k) = k^2 A + i k B + C for the 1D problem with the PDE rows multiplied
// by -1 and the boundary rows by i k, so that every block is real.
struct Pencil {
  RMatrix A;
  RMatrix B;
  RMatrix C;
};

Pencil build_pencil(const NodeSet& nodes, const Kernel& kernel);
CMatrix evaluate_pencil(const Pencil& pencil, cplx kappa);

// All 2N eigenvalues of the companion linearization [[0, I], [-A^-1 C, -i A^-1 B]],
// sorted by real part. Throws SingularMatrixError when A is singular.
std::vector<cplx> singular_wavenumbers(const Pencil& pencil);

// 2 pi N / Re(k): points per wavelength of a real problem at wavenumber k.
double resolution_of(cplx kappa, int n);

// |k| <= rel * max|k_i|.
bool is_structural_zero(cplx kappa, const std::vector<cplx>& all, double rel = 1e-6);
int count_structural_zeros(const std::vector<cplx>& values, double rel = 1e-6);
// Re k > rel * max|k_i|: purely imaginary values carry rounding-level real parts.
bool has_positive_real_part(cplx kappa, const std::vector<cplx>& all, double rel = 1e-6);

// Largest distance, relative to max|k_i|, between a value and its greedy
// nearest-neighbor partner under k -> -conj(k).
double pairing_defect(const std::vector<cplx>& values);

// Smallest singular value of M(k) relative to its Frobenius norm.
double relative_sigma_min(const Pencil& pencil, cplx kappa);

}  // namespace helmrbf
