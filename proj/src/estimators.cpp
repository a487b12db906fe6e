#include "errdist/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errdist/errors.hpp"
#include "errdist/models.hpp"

namespace errdist {

Bandwidths bandwidths(const BandwidthSchedule& schedule, std::size_t n) {
  if (n < 2) throw InvalidSize("bandwidth schedule needs n >= 2");
  if (!(schedule.a_constant > 0.0) || !(schedule.c_constant > 0.0))
    throw InvalidArgument("bandwidth constants must be positive");
  const double nn = static_cast<double>(n);
  const double root4 = std::pow(nn, -0.25);
  return {schedule.a_constant * root4 / std::log(nn), schedule.c_constant * root4};
}

EdfCurve::EdfCurve(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw InvalidArgument("EDF needs at least one sample");
  std::sort(samples_.begin(), samples_.end());
}

double EdfCurve::eval(double t) const noexcept {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EdfCurve::eval_left(double t) const noexcept {
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

SmoothedEdf::SmoothedEdf(std::vector<double> residuals, double bandwidth, Kernel kernel)
    : residuals_(std::move(residuals)), bandwidth_(bandwidth), kernel_(kernel) {
  if (residuals_.empty()) throw InvalidArgument("smoothed EDF needs at least one residual");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_))
    throw InvalidArgument("smoothing bandwidth must be positive");
  std::sort(residuals_.begin(), residuals_.end());
}

double SmoothedEdf::eval(double t) const noexcept {
  // residuals <= t - a have K = 1; residuals >= t + a have K = 0
  const auto lo = std::upper_bound(residuals_.begin(), residuals_.end(), t - bandwidth_);
  const auto hi = std::lower_bound(lo, residuals_.end(), t + bandwidth_);
  double acc = static_cast<double>(lo - residuals_.begin());
  for (auto it = lo; it != hi; ++it) acc += kernel_.cdf((t - *it) / bandwidth_);
  return acc / static_cast<double>(residuals_.size());
}

double SmoothedEdf::density(double t) const noexcept {
  const auto lo = std::lower_bound(residuals_.begin(), residuals_.end(), t - bandwidth_);
  const auto hi = std::upper_bound(lo, residuals_.end(), t + bandwidth_);
  double acc = 0.0;
  for (auto it = lo; it != hi; ++it) acc += kernel_.value((t - *it) / bandwidth_);
  return acc / (static_cast<double>(residuals_.size()) * bandwidth_);
}

namespace {

double sum_squares(std::span<const double> e) {
  return std::accumulate(e.begin(), e.end(), 0.0, [](double acc, double v) { return acc + v * v; });
}

}  // namespace

double c0_hat(std::span<const double> errors, double t) {
  const double ss = sum_squares(errors);
  if (!(ss > 0.0)) throw DegenerateErrors("c0_hat: all errors are zero");
  double num = 0.0;
  for (double e : errors)
    if (e <= t) num += e;
  return num / ss;
}

double meanzero_corrected_eval(std::span<const double> errors, double t) {
  if (errors.empty()) throw InvalidArgument("no errors");
  const double c0 = c0_hat(errors, t);
  const double n = static_cast<double>(errors.size());
  double below = 0.0;
  for (double e : errors)
    if (e <= t) below += 1.0;
  const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
  return below / n - c0 * mean;
}

MeanZeroCorrected::MeanZeroCorrected(std::vector<double> errors) : sorted_(std::move(errors)) {
  if (sorted_.empty()) throw InvalidArgument("no errors");
  sum_sq_ = sum_squares(sorted_);
  if (!(sum_sq_ > 0.0)) throw DegenerateErrors("mean-zero correction: all errors are zero");
  mean_ = std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.resize(sorted_.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
}

double MeanZeroCorrected::eval(double t) const {
  const auto k = static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin());
  const double n = static_cast<double>(sorted_.size());
  return static_cast<double>(k) / n - prefix_[k] / sum_sq_ * mean_;
}

ElSolution el_solve(std::span<const double> errors) {
  const std::size_t n = errors.size();
  if (n == 0) throw InvalidArgument("no errors");
  const auto [mn_it, mx_it] = std::minmax_element(errors.begin(), errors.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mn < 0.0 && mx > 0.0))
    throw InfeasibleConstraint("empirical likelihood: 0 is not inside the convex hull of the errors");

  // g is strictly decreasing on (lo, hi) and runs from +inf to -inf
  double lo = -1.0 / mx, hi = -1.0 / mn;
  struct Score {
    double g, slope, magnitude;
  };
  auto score = [&](double lambda) {
    Score s{0.0, 0.0, 0.0};
    for (double e : errors) {
      const double inv = 1.0 / (1.0 + lambda * e);
      s.g += e * inv;
      s.magnitude += std::abs(e * inv);
      s.slope -= e * e * inv * inv;
    }
    return s;
  };
  auto finish = [&](double lambda, int iter) {
    ElSolution sol{std::vector<double>(n), lambda, iter};
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.weights[i] = 1.0 / (static_cast<double>(n) * (1.0 + lambda * errors[i]));
      total += sol.weights[i];
    }
    for (double& p : sol.weights) p /= total;
    return sol;
  };

  // relative to the summands' magnitude, |sum p_i e_i| <= 1e-12 max|e_i|
  constexpr double kTol = 1e-12;
  double lambda = 0.0;
  for (int iter = 1; iter <= 100; ++iter) {
    const Score s = score(lambda);
    if (std::abs(s.g) <= kTol * s.magnitude) return finish(lambda, iter);
    if (s.g > 0.0) lo = lambda; else hi = lambda;
    double next = lambda - s.g / s.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda || next == lo || next == hi) {
      // bracket exhausted at double resolution; accept if the constraint still holds
      ElSolution sol = finish(lambda, iter);
      const double scale = std::max(-mn, mx);
      double moment = 0.0;
      for (std::size_t i = 0; i < n; ++i) moment += sol.weights[i] * errors[i];
      if (std::abs(moment) <= 1e-10 * scale) return sol;
      break;
    }
    lambda = next;
  }
  throw NumericalFailure("empirical likelihood: Newton iteration did not converge");
}

double el_cdf_eval(std::span<const double> errors, std::span<const double> weights, double t) {
  if (errors.size() != weights.size())
    throw InvalidArgument("el_cdf_eval: errors and weights differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i] <= t) acc += weights[i];
  return acc;
}

double influence_function(const ErrorModel& model, double eps, double t) {
  return (eps <= t ? 1.0 : 0.0) - model.cdf(t) + model.density(t) * eps;
}

}  // namespace errdist
