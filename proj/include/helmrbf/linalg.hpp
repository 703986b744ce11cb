#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmrbf/exec.hpp"

namespace helmrbf {

// Dense column-major matrix.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<T> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const T> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = DenseMatrix<cplx>;
using RMatrix = DenseMatrix<double>;

CMatrix to_complex(const RMatrix& m);

double norm_fro(const CMatrix& a);
double norm_inf(const CMatrix& a);
double norm_inf(std::span<const cplx> v);
std::vector<cplx> multiply(const CMatrix& a, std::span<const cplx> x);
std::vector<cplx> multiply_adjoint(const CMatrix& a, std::span<const cplx> x);
CMatrix multiply(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : std::runtime_error("matrix is singular: zero pivot at column " + std::to_string(pivot)),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class NonFiniteMatrixError : public std::runtime_error {
 public:
  NonFiniteMatrixError() : std::runtime_error("matrix has non-finite entries") {}
};

// P A = L U with partial pivoting. L is unit lower triangular; both factors
// share the packed storage.
class LUFactors {
 public:
  LUFactors(CMatrix packed, std::vector<std::size_t> pivots, double growth);

  std::size_t size() const { return lu_.rows(); }
  const CMatrix& packed() const { return lu_; }
  const std::vector<std::size_t>& pivots() const { return piv_; }
  // max|U| / max|A|; large values flag an unstable elimination.
  double growth() const { return growth_; }
  bool growth_flag() const { return growth_ > 1e8; }

  std::vector<cplx> solve(std::span<const cplx> b) const;
  CMatrix solve(const CMatrix& b) const;
  // Solves A^H x = b.
  std::vector<cplx> solve_adjoint(std::span<const cplx> b) const;
  cplx determinant() const;

 private:
  CMatrix lu_;
  std::vector<std::size_t> piv_;
  double growth_;
};

// Blocked right-looking factorization; Exec::Serial runs the unblocked
// reference elimination.
LUFactors lu_factor(CMatrix a, Exec exec = Exec::Parallel);
std::vector<cplx> lu_solve(const CMatrix& a, std::span<const cplx> b, Exec exec = Exec::Parallel);

// 2-norm condition number estimate from power iterations on A^H A and on
// (A^H A)^{-1}. Returns +inf for singular input.
double cond_estimate(const CMatrix& a);
double cond_estimate(const CMatrix& a, const LUFactors& lu);
// Exact 2-norm condition number from a full SVD (debug path, n <= 300).
double cond_svd(const CMatrix& a);
std::vector<double> singular_values(const CMatrix& a);

class EigenConvergenceError : public std::runtime_error {
 public:
  explicit EigenConvergenceError(std::size_t index)
      : std::runtime_error("QR iteration did not converge for eigenvalue index " +
                           std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// All eigenvalues of a square complex matrix: balancing, Householder
// reduction to Hessenberg form, then single-shift complex QR.
std::vector<cplx> eig(CMatrix a);

}  // namespace helmrbf
