#include "errdist/models.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "errdist/errors.hpp"
#include "errdist/quadrature.hpp"
#include "errdist/rng.hpp"

namespace errdist {
namespace {

constexpr double kMinStudentDf = 4.5;

double std_normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

}  // namespace

ErrorModel ErrorModel::normal(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("normal scale must be positive");
  return ErrorModel(ErrorFamily::normal, scale, std::numeric_limits<double>::infinity());
}

ErrorModel ErrorModel::student_t(double df, double scale) {
  if (!(df >= kMinStudentDf) || !std::isfinite(df))
    throw InvalidArgument("student_t needs df >= 4.5 (finite moments of order > 4)");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("student_t scale must be positive");
  return ErrorModel(ErrorFamily::student_t, scale, df);
}

ErrorModel ErrorModel::uniform(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("uniform half width must be positive");
  return ErrorModel(ErrorFamily::uniform, half_width, std::numeric_limits<double>::infinity());
}

std::string ErrorModel::name() const {
  switch (family_) {
    case ErrorFamily::normal: return "normal";
    case ErrorFamily::student_t: return "student_t";
    case ErrorFamily::uniform: return "uniform";
  }
  return "unknown";
}

double ErrorModel::density(double x) const {
  switch (family_) {
    case ErrorFamily::normal: return std_normal_pdf(x / scale_) / scale_;
    case ErrorFamily::student_t:
      return boost::math::pdf(boost::math::students_t_distribution<double>(df_), x / scale_) / scale_;
    case ErrorFamily::uniform: return std::abs(x) <= scale_ ? 0.5 / scale_ : 0.0;
  }
  return 0.0;
}

double ErrorModel::cdf(double x) const {
  switch (family_) {
    case ErrorFamily::normal: return std_normal_cdf(x / scale_);
    case ErrorFamily::student_t:
      if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
      return boost::math::cdf(boost::math::students_t_distribution<double>(df_), x / scale_);
    case ErrorFamily::uniform:
      if (x <= -scale_) return 0.0;
      if (x >= scale_) return 1.0;
      return 0.5 * (x + scale_) / scale_;
  }
  return 0.0;
}

double ErrorModel::variance() const {
  switch (family_) {
    case ErrorFamily::normal: return scale_ * scale_;
    case ErrorFamily::student_t: return scale_ * scale_ * df_ / (df_ - 2.0);
    case ErrorFamily::uniform: return scale_ * scale_ / 3.0;
  }
  return 0.0;
}

double ErrorModel::tail_first_moment(double t) const {
  if (std::isinf(t)) return 0.0;
  switch (family_) {
    case ErrorFamily::normal:
      return variance() * density(t);
    case ErrorFamily::student_t: {
      // d/du [-(df + u^2) f(u) / (df - 1)] = u f(u) for the standard t density
      const double u = t / scale_;
      const double fu = boost::math::pdf(boost::math::students_t_distribution<double>(df_), u);
      return scale_ * (df_ + u * u) / (df_ - 1.0) * fu;
    }
    case ErrorFamily::uniform: {
      if (t >= scale_) return 0.0;
      const double lo = std::max(t, -scale_);
      return (scale_ * scale_ - lo * lo) / (4.0 * scale_);
    }
  }
  return 0.0;
}

double ErrorModel::sample(Philox4x32& rng) const {
  switch (family_) {
    case ErrorFamily::normal: return scale_ * rng.normal();
    case ErrorFamily::student_t: {
      // Bailey's polar method
      for (;;) {
        const double u = 2.0 * rng.uniform() - 1.0;
        const double v = 2.0 * rng.uniform() - 1.0;
        const double w = u * u + v * v;
        if (w >= 1.0 || w == 0.0) continue;
        return scale_ * u * std::sqrt(df_ * (std::pow(w, -2.0 / df_) - 1.0) / w);
      }
    }
    case ErrorFamily::uniform: return scale_ * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

double tail_first_moment_quadrature(const ErrorModel& model, double t, double abs_tol) {
  const auto integrand = [&](double x) { return x * model.density(x); };
  const double inf = std::numeric_limits<double>::infinity();
  if (model.family() == ErrorFamily::uniform) {
    const double b = model.scale();
    if (t >= b) return 0.0;
    return integrate(integrand, std::max(t, -b), b, abs_tol);
  }
  // split at 0 keeps the mode off the infinite-interval transform
  if (t < 0.0) return integrate(integrand, t, 0.0, abs_tol) + integrate(integrand, 0.0, inf, abs_tol);
  return integrate(integrand, t, inf, abs_tol);
}

RegressionModel RegressionModel::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients)
    if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
  return RegressionModel(RegressionFamily::polynomial, std::move(coefficients));
}

RegressionModel RegressionModel::sinusoid(double amplitude, double frequency) {
  if (!std::isfinite(amplitude) || !std::isfinite(frequency))
    throw InvalidArgument("sinusoid parameters must be finite");
  return RegressionModel(RegressionFamily::sinusoid, {amplitude, frequency});
}

double RegressionModel::operator()(double z) const {
  if (family_ == RegressionFamily::sinusoid)
    return params_[0] * std::sin(2.0 * std::numbers::pi * params_[1] * z);
  double acc = 0.0;
  for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double RegressionModel::second_derivative(double z) const {
  if (family_ == RegressionFamily::sinusoid) {
    const double omega = 2.0 * std::numbers::pi * params_[1];
    return -params_[0] * omega * omega * std::sin(omega * z);
  }
  double acc = 0.0;
  for (std::size_t k = params_.size(); k-- > 2;)
    acc = acc * z + params_[k] * static_cast<double>(k * (k - 1));
  return acc;
}

CovariateModel CovariateModel::uniform() { return CovariateModel(CovariateFamily::uniform, 1.0); }

CovariateModel CovariateModel::linear(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("linear covariate alpha must lie in (0,1]");
  return CovariateModel(CovariateFamily::linear, alpha);
}

double CovariateModel::density(double z) const {
  if (z < 0.0 || z > 1.0) return 0.0;
  if (family_ == CovariateFamily::uniform) return 1.0;
  return alpha_ + 2.0 * (1.0 - alpha_) * z;
}

double CovariateModel::sample(Philox4x32& rng) const {
  const double u = rng.uniform();
  if (family_ == CovariateFamily::uniform) return u;
  // inverse of G(z) = alpha z + (1-alpha) z^2, written without cancellation
  return 2.0 * u / (alpha_ + std::sqrt(alpha_ * alpha_ + 4.0 * (1.0 - alpha_) * u));
}

double var_empirical(const ErrorModel& model, double t) {
  const double F = model.cdf(t);
  return F * (1.0 - F);
}

double var_smoothed(const ErrorModel& model, double t) {
  const double f = model.density(t);
  return var_empirical(model, t) + model.variance() * f * f - 2.0 * f * model.tail_first_moment(t);
}

double var_efficient_meanzero(const ErrorModel& model, double t) {
  const double tail = model.tail_first_moment(t);
  return var_empirical(model, t) - tail * tail / model.variance();
}

double variance_gap(const ErrorModel& model, double t) {
  const double sigma = std::sqrt(model.variance());
  const double diff = sigma * model.density(t) - model.tail_first_moment(t) / sigma;
  return diff * diff;
}

Dataset sample_scenario(const CovariateModel& covariate, const RegressionModel& regression,
                        const ErrorModel& error, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidSize("scenario needs n >= 2");
  Philox4x32 cov_stream(seed, 0);
  Philox4x32 err_stream(seed, 1);
  std::vector<double> z(n), y(n), eps(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = covariate.sample(cov_stream);
  for (std::size_t i = 0; i < n; ++i) eps[i] = error.sample(err_stream);
  for (std::size_t i = 0; i < n; ++i) y[i] = regression(z[i]) + eps[i];
  return Dataset(std::move(z), std::move(y), std::move(eps));
}

}  // namespace errdist
