#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errdist/localpoly.hpp"

namespace errdist {

class Philox4x32;

enum class ErrorFamily { normal, student_t, uniform };

/// Centered error law with closed-form F, f, variance and tail first moment.
///
/// normal(scale): N(0, scale^2).
/// student_t(df, scale): scale * T_df, df >= 4.5 (finite moments beyond the fourth).
/// uniform(half_width): U(-b, b). Its density is not Lipschitz at +-b, so it is
/// marked test-only and refused by the Monte Carlo engine.
class ErrorModel {
 public:
  static ErrorModel normal(double scale = 1.0);
  static ErrorModel student_t(double df, double scale = 1.0);
  static ErrorModel uniform(double half_width = 1.0);

  ErrorFamily family() const noexcept { return family_; }
  std::string name() const;
  double scale() const noexcept { return scale_; }
  double df() const noexcept { return df_; }
  bool test_only() const noexcept { return family_ == ErrorFamily::uniform; }

  double density(double x) const;
  double cdf(double x) const;
  double variance() const;
  /// T(t) = integral_t^inf x f(x) dx, closed form.
  double tail_first_moment(double t) const;
  double sample(Philox4x32& rng) const;

 private:
  ErrorModel(ErrorFamily family, double scale, double df) : family_(family), scale_(scale), df_(df) {}

  ErrorFamily family_;
  double scale_;
  double df_;
};

/// Generic route for T(t): adaptive quadrature of x f(x) over [t, inf).
double tail_first_moment_quadrature(const ErrorModel& model, double t, double abs_tol = 1e-10);

inline double tail_first_moment(const ErrorModel& model, double t) {
  return model.tail_first_moment(t);
}

enum class RegressionFamily { polynomial, sinusoid };

/// Smooth regression function on [0,1].
class RegressionModel {
 public:
  /// r(z) = sum_k coefficients[k] z^k.
  static RegressionModel polynomial(std::vector<double> coefficients);
  /// r(z) = amplitude * sin(2 pi frequency z).
  static RegressionModel sinusoid(double amplitude, double frequency);

  RegressionFamily family() const noexcept { return family_; }
  const std::vector<double>& coefficients() const noexcept { return params_; }
  double operator()(double z) const;
  double second_derivative(double z) const;

 private:
  RegressionModel(RegressionFamily family, std::vector<double> params)
      : family_(family), params_(std::move(params)) {}

  RegressionFamily family_;
  std::vector<double> params_;  // polynomial coefficients, or {amplitude, frequency}
};

enum class CovariateFamily { uniform, linear };

/// Covariate law on [0,1]: uniform, or g(z) = alpha + 2(1-alpha) z with alpha in (0,1].
class CovariateModel {
 public:
  static CovariateModel uniform();
  static CovariateModel linear(double alpha);

  CovariateFamily family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  double density(double z) const;
  double sample(Philox4x32& rng) const;

 private:
  CovariateModel(CovariateFamily family, double alpha) : family_(family), alpha_(alpha) {}

  CovariateFamily family_;
  double alpha_;
};

// Asymptotic variances of sqrt(n)(estimate(t) - F(t)).

/// F(1-F): empirical distribution function of the true errors.
double var_empirical(const ErrorModel& model, double t);
/// F(1-F) + sigma^2 f^2 - 2 f T: the smoothed residual estimator.
double var_smoothed(const ErrorModel& model, double t);
/// F(1-F) - T^2 / sigma^2: efficient estimator under the mean-zero constraint.
double var_efficient_meanzero(const ErrorModel& model, double t);
/// (sigma f - T / sigma)^2, the cost of estimating the regression function.
double variance_gap(const ErrorModel& model, double t);

/// Draws Z ~ g, eps ~ f independently and returns Y = r(Z) + eps with the
/// true errors attached. Covariates and errors use separate counter streams.
Dataset sample_scenario(const CovariateModel& covariate, const RegressionModel& regression,
                        const ErrorModel& error, std::size_t n, std::uint64_t seed);

}  // namespace errdist
