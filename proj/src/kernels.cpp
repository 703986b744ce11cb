#include "helmrbf/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace helmrbf {

Kernel::Kernel(KernelFamily family, double shape) : family_(family), shape_(shape) {
  if (!(shape > 0) || !std::isfinite(shape)) {
    throw std::invalid_argument("kernel shape parameter must be positive, got " +
                                std::to_string(shape));
  }
}

double Kernel::eval(double r) const {
  const double t = shape_ * r;
  switch (family_) {
    case KernelFamily::Multiquadric:
      return std::sqrt(1.0 + t * t);
    case KernelFamily::Gaussian:
      return std::exp(-t * t);
    case KernelFamily::InverseQuadratic:
      return 1.0 / (1.0 + t * t);
  }
  return 0;
}

RadialDerivatives Kernel::derivatives(double r) const {
  const double t = shape_ * r;
  const double t2 = t * t;
  RadialDerivatives out;
  switch (family_) {
    case KernelFamily::Multiquadric: {
      const double s = std::sqrt(1.0 + t2);
      const double s3 = s * s * s;
      out.value = s;
      out.q1 = 1.0 / s;
      out.d2 = 1.0 / s3;
      out.q2 = -1.0 / s3;
      break;
    }
    case KernelFamily::Gaussian: {
      const double e = std::exp(-t2);
      out.value = e;
      out.q1 = -2.0 * e;
      out.d2 = (4.0 * t2 - 2.0) * e;
      out.q2 = 4.0 * e;
      break;
    }
    case KernelFamily::InverseQuadratic: {
      const double u = 1.0 / (1.0 + t2);
      const double u2 = u * u;
      out.value = u;
      out.q1 = -2.0 * u2;
      out.d2 = (6.0 * t2 - 2.0) * u2 * u;
      out.q2 = 8.0 * u2 * u;
      break;
    }
  }
  return out;
}

std::array<double, 5> Kernel::derivatives_1d(double offset) const {
  const double e = shape_;
  const double t = e * offset;
  const double t2 = t * t;
  std::array<double, 5> d{};
  switch (family_) {
    case KernelFamily::Multiquadric: {
      const double s2 = 1.0 + t2;
      const double s = std::sqrt(s2);
      const double s3 = s2 * s;
      const double s5 = s3 * s2;
      d = {s, t / s, 1.0 / s3, -3.0 * t / s5, (12.0 * t2 - 3.0) / (s5 * s2)};
      break;
    }
    case KernelFamily::Gaussian: {
      const double g = std::exp(-t2);
      d = {g, -2.0 * t * g, (4.0 * t2 - 2.0) * g, (12.0 * t - 8.0 * t2 * t) * g,
           (16.0 * t2 * t2 - 48.0 * t2 + 12.0) * g};
      break;
    }
    case KernelFamily::InverseQuadratic: {
      const double u = 1.0 / (1.0 + t2);
      const double u2 = u * u;
      const double u4 = u2 * u2;
      d = {u, -2.0 * t * u2, (6.0 * t2 - 2.0) * u2 * u, 24.0 * t * (1.0 - t2) * u4,
           24.0 * (5.0 * t2 * t2 - 10.0 * t2 + 1.0) * u4 * u};
      break;
    }
  }
  double scale = 1.0;
  for (auto& v : d) {
    v *= scale;
    scale *= e;
  }
  return d;
}

std::vector<double> Kernel::taylor_coefficients(int n) const {
  if (n < 1) throw std::invalid_argument("taylor_coefficients needs n >= 1");
  std::vector<double> a(static_cast<std::size_t>(n));
  a[0] = 1.0;
  for (int j = 0; j + 1 < n; ++j) {
    switch (family_) {
      case KernelFamily::Multiquadric:
        a[j + 1] = a[j] * (0.5 - j) / (j + 1);
        break;
      case KernelFamily::Gaussian:
        a[j + 1] = -a[j] / (j + 1);
        break;
      case KernelFamily::InverseQuadratic:
        a[j + 1] = -a[j];
        break;
    }
  }
  return a;
}

KernelJet2D jet_2d(const Kernel& kernel, double dx1, double dx2) {
  const double e2 = kernel.shape() * kernel.shape();
  const auto rd = kernel.derivatives(std::hypot(dx1, dx2));
  return {rd.value, e2 * dx1 * rd.q1, e2 * dx2 * rd.q1, e2 * (rd.q1 + rd.d2)};
}

std::array<double, 3> hessian_2d(const Kernel& kernel, double dx1, double dx2) {
  const double e2 = kernel.shape() * kernel.shape();
  const auto rd = kernel.derivatives(std::hypot(dx1, dx2));
  const double e4 = e2 * e2;
  return {e2 * rd.q1 + e4 * dx1 * dx1 * rd.q2, e4 * dx1 * dx2 * rd.q2,
          e2 * rd.q1 + e4 * dx2 * dx2 * rd.q2};
}

KernelFamily parse_kernel_family(std::string_view token) {
  if (token == "mq") return KernelFamily::Multiquadric;
  if (token == "ga") return KernelFamily::Gaussian;
  if (token == "iq") return KernelFamily::InverseQuadratic;
  throw std::invalid_argument("unknown kernel family '" + std::string(token) +
                              "' (expected mq | ga | iq)");
}

std::string_view kernel_token(KernelFamily family) {
  switch (family) {
    case KernelFamily::Multiquadric:
      return "mq";
    case KernelFamily::Gaussian:
      return "ga";
    case KernelFamily::InverseQuadratic:
      return "iq";
  }
  return "?";
}

}  // namespace helmrbf
