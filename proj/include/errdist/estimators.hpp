#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "errdist/kernels.hpp"

namespace errdist {

class ErrorModel;

struct BandwidthSchedule {
  double a_constant = 1.0;
  double c_constant = 1.0;
};

struct Bandwidths {
  double a_n;  // smoothing bandwidth for the residual distribution
  double c_n;  // local regression bandwidth
};

/// a_n = a_const n^{-1/4} / ln n, c_n = c_const n^{-1/4}. Throws InvalidSize for n < 2.
Bandwidths bandwidths(const BandwidthSchedule& schedule, std::size_t n);

/// Right-continuous empirical distribution function.
class EdfCurve {
 public:
  explicit EdfCurve(std::vector<double> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }
  /// Fraction of samples <= t.
  double eval(double t) const noexcept;
  /// Fraction of samples < t (left limit).
  double eval_left(double t) const noexcept;

 private:
  std::vector<double> samples_;
};

/// Kernel-smoothed EDF of residuals: F*(t) = (1/n) sum K((t - e_i)/a).
///
/// Residuals are kept sorted so that only the ones within a bandwidth of t are
/// visited; everything left of t - a contributes a full 1.
class SmoothedEdf {
 public:
  SmoothedEdf(std::vector<double> residuals, double bandwidth, Kernel kernel = Kernel::triweight());

  std::size_t size() const noexcept { return residuals_.size(); }
  double bandwidth() const noexcept { return bandwidth_; }
  Kernel kernel() const noexcept { return kernel_; }
  const std::vector<double>& sorted_residuals() const noexcept { return residuals_; }

  double eval(double t) const noexcept;
  /// Kernel density estimate f*(t) = (1/(n a)) sum k((t - e_i)/a).
  double density(double t) const noexcept;

 private:
  std::vector<double> residuals_;
  double bandwidth_;
  Kernel kernel_;
};

inline double edf_eval(const EdfCurve& curve, double t) { return curve.eval(t); }
inline double smoothed_edf_eval(const SmoothedEdf& est, double t) { return est.eval(t); }
inline double smoothed_density_eval(const SmoothedEdf& est, double t) { return est.density(t); }

/// sum e_i 1{e_i <= t} / sum e_i^2. Throws DegenerateErrors if all e_i are 0.
double c0_hat(std::span<const double> errors, double t);

/// EDF(t) - c0_hat(t) * mean(errors). Not clipped to [0,1].
double meanzero_corrected_eval(std::span<const double> errors, double t);

/// Mean-zero corrected estimator prepared once for repeated evaluation.
class MeanZeroCorrected {
 public:
  explicit MeanZeroCorrected(std::vector<double> errors);
  double eval(double t) const;

 private:
  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the k smallest errors
  double sum_sq_;
  double mean_;
};

struct ElSolution {
  std::vector<double> weights;
  double lambda;
  int iterations;
};

/// Empirical likelihood weights maximizing prod p_i subject to sum p_i = 1 and
/// sum p_i e_i = 0: p_i = 1 / (n (1 + lambda e_i)).
///
/// lambda is the root of the strictly decreasing dual score
/// g(lambda) = sum e_i / (1 + lambda e_i) on (-1/max e, -1/min e), located by
/// Newton steps kept inside a shrinking bisection bracket. Throws
/// InfeasibleConstraint when 0 is not strictly inside (min e, max e) and
/// NumericalFailure after 100 iterations without convergence.
ElSolution el_solve(std::span<const double> errors);
inline std::vector<double> el_weights(std::span<const double> errors) {
  return el_solve(errors).weights;
}

/// sum p_i 1{e_i <= t}. Throws InvalidArgument on length mismatch.
double el_cdf_eval(std::span<const double> errors, std::span<const double> weights, double t);

/// 1{eps <= t} - F(t) + f(t) eps.
double influence_function(const ErrorModel& model, double eps, double t);

}  // namespace errdist
