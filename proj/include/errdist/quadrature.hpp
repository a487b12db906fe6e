#pragma once

#include <functional>

namespace errdist {

/// Adaptive Gauss-Kronrod (61-point) integral of f over [a, b]; either
/// limit may be infinite. `abs_tol` bounds the estimated absolute error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

}  // namespace errdist
