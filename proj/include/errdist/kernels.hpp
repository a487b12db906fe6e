#pragma once

#include <string>
#include <string_view>

namespace errdist {

enum class KernelFamily { triweight, epanechnikov, uniform };

/// Symmetric probability density supported on [-1, 1].
///
/// Triweight (35/32)(1-x^2)^3 is C^2 on the whole line and is the default
/// smoothing kernel for the residual distribution estimate. Epanechnikov
/// (3/4)(1-x^2) is the default local-regression weight. The uniform kernel
/// exists for tests only; it has no derivative.
class Kernel {
 public:
  constexpr explicit Kernel(KernelFamily family = KernelFamily::triweight) noexcept
      : family_(family) {}

  static constexpr Kernel triweight() noexcept { return Kernel(KernelFamily::triweight); }
  static constexpr Kernel epanechnikov() noexcept { return Kernel(KernelFamily::epanechnikov); }
  static constexpr Kernel uniform() noexcept { return Kernel(KernelFamily::uniform); }

  /// Parses "triweight", "epanechnikov" or "uniform"; throws InvalidArgument otherwise.
  static Kernel from_name(std::string_view name);

  KernelFamily family() const noexcept { return family_; }
  std::string name() const;
  static constexpr double support_radius() noexcept { return 1.0; }

  double value(double x) const noexcept;
  /// Throws UnsupportedOperation for the uniform kernel.
  double derivative(double x) const;
  /// Only defined for triweight; throws UnsupportedOperation otherwise.
  double second_derivative(double x) const;
  /// Exact antiderivative, 0 below -1 and 1 above 1.
  double cdf(double x) const noexcept;

  friend constexpr bool operator==(Kernel, Kernel) = default;

 private:
  KernelFamily family_;
};

inline double kernel_value(Kernel k, double x) { return k.value(x); }
inline double kernel_derivative(Kernel k, double x) { return k.derivative(x); }
inline double kernel_second_derivative(Kernel k, double x) { return k.second_derivative(x); }
inline double kernel_cdf(Kernel k, double x) { return k.cdf(x); }

}  // namespace errdist
