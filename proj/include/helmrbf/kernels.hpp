#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace helmrbf {

enum class KernelFamily { Multiquadric, Gaussian, InverseQuadratic };

// Radial derivative data at t = eps * r, kept in quotient form so that every
// entry stays finite at r = 0.
struct RadialDerivatives {
  double value = 0;  // phi(t)
  double q1 = 0;     // phi'(t) / t
  double d2 = 0;     // phi''(t)
  double q2 = 0;     // (phi''(t) - phi'(t)/t) / t^2
};

class Kernel {
 public:
  Kernel(KernelFamily family, double shape);

  KernelFamily family() const { return family_; }
  double shape() const { return shape_; }

  // phi(eps * r). Even in r.
  double eval(double r) const;
  RadialDerivatives derivatives(double r) const;

  // d^n/dx^n phi(eps * (x - c)) for n = 0..4, as a function of the signed
  // offset x - c. Used by the 1D operators, including the symmetric scheme.
  std::array<double, 5> derivatives_1d(double offset) const;

  // a_j with phi(t) = sum_j a_j t^(2j).
  std::vector<double> taylor_coefficients(int n) const;

 private:
  KernelFamily family_;
  double shape_;
};

// Value, gradient and Laplacian of g(x) = phi(eps |x - c|) in two dimensions.
struct KernelJet2D {
  double value = 0;
  double dx1 = 0;
  double dx2 = 0;
  double laplacian = 0;
};

KernelJet2D jet_2d(const Kernel& kernel, double dx1, double dx2);

// Hessian entries of g at offset (dx1, dx2): {g_11, g_12, g_22}.
std::array<double, 3> hessian_2d(const Kernel& kernel, double dx1, double dx2);

KernelFamily parse_kernel_family(std::string_view token);
std::string_view kernel_token(KernelFamily family);

}  // namespace helmrbf
