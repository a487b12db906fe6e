#include "errdist/kernels.hpp"

#include <cmath>

#include "errdist/errors.hpp"

namespace errdist {

Kernel Kernel::from_name(std::string_view name) {
  if (name == "triweight") return triweight();
  if (name == "epanechnikov") return epanechnikov();
  if (name == "uniform") return uniform();
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

std::string Kernel::name() const {
  switch (family_) {
    case KernelFamily::triweight: return "triweight";
    case KernelFamily::epanechnikov: return "epanechnikov";
    case KernelFamily::uniform: return "uniform";
  }
  return "unknown";
}

double Kernel::value(double x) const noexcept {
  if (std::abs(x) > 1.0) return 0.0;
  const double s = 1.0 - x * x;
  switch (family_) {
    case KernelFamily::triweight: return 35.0 / 32.0 * s * s * s;
    case KernelFamily::epanechnikov: return 0.75 * s;
    case KernelFamily::uniform: return 0.5;
  }
  return 0.0;
}

double Kernel::derivative(double x) const {
  switch (family_) {
    case KernelFamily::triweight: {
      if (std::abs(x) >= 1.0) return 0.0;
      const double s = 1.0 - x * x;
      return -105.0 / 16.0 * x * s * s;
    }
    case KernelFamily::epanechnikov:
      // one-sided at +-1; inside the support the derivative is -3x/2
      if (std::abs(x) > 1.0) return 0.0;
      return -1.5 * x;
    case KernelFamily::uniform:
      break;
  }
  throw UnsupportedOperation("kernel '" + name() + "' has no derivative");
}

double Kernel::second_derivative(double x) const {
  if (family_ != KernelFamily::triweight)
    throw UnsupportedOperation("second derivative only available for triweight");
  if (std::abs(x) >= 1.0) return 0.0;
  const double x2 = x * x;
  return 105.0 / 16.0 * (1.0 - x2) * (5.0 * x2 - 1.0);
}

double Kernel::cdf(double x) const noexcept {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  switch (family_) {
    case KernelFamily::triweight:
      // 1/2 + (35/32)(x - x^3 + 3x^5/5 - x^7/7)
      return 0.5 + 35.0 / 32.0 * x * (1.0 + x2 * (-1.0 + x2 * (0.6 - x2 / 7.0)));
    case KernelFamily::epanechnikov:
      return 0.5 + 0.75 * x * (1.0 - x2 / 3.0);
    case KernelFamily::uniform:
      return 0.5 * (x + 1.0);
  }
  return 0.0;
}

}  // namespace errdist
