#include "errdist/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace errdist {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (a == b) return 0.0;
  // boost's tolerance is relative to the integral's L1 norm; tighten until the
  // reported error estimate meets the absolute target.
  double err = 0.0, l1 = 0.0;
  double rel = 1e-12;
  double value = Rule::integrate(f, a, b, 20, rel, &err, &l1);
  if (err > abs_tol && l1 > 0.0) {
    value = Rule::integrate(f, a, b, 30, std::max(abs_tol / l1 * 0.1,
                                                  std::numeric_limits<double>::epsilon()),
                            &err, &l1);
  }
  return value;
}

}  // namespace errdist
