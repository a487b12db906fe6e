#include "errdist/localpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errdist/errors.hpp"

namespace errdist {

Dataset::Dataset(std::vector<double> z_, std::vector<double> y_,
                 std::optional<std::vector<double>> true_errors_)
    : z(std::move(z_)), y(std::move(y_)), true_errors(std::move(true_errors_)) {
  if (z.empty()) throw InvalidArgument("dataset must contain at least one observation");
  if (y.size() != z.size()) throw InvalidArgument("z and y lengths differ");
  if (true_errors && true_errors->size() != z.size())
    throw InvalidArgument("true_errors length differs from z");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
  };
  if (!finite(z) || !finite(y) || (true_errors && !finite(*true_errors)))
    throw InvalidArgument("dataset contains NaN or infinite entries");
}

void LocalPolyConfig::validate() const {
  if (order < 0) throw InvalidArgument("order must be >= 0");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InvalidArgument("bandwidth must be positive");
  if (!(condition_cap > 1.0)) throw InvalidArgument("condition_cap must exceed 1");
  if (!(bandwidth_growth > 1.0)) throw InvalidArgument("bandwidth_growth must exceed 1");
  if (max_widenings < 0) throw InvalidArgument("max_widenings must be >= 0");
}

Eigen::VectorXd weight_vector(const LocalPolyConfig& config, double u) {
  const int d = config.order;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d + 1);
  const double s = u / config.bandwidth;
  const double base = config.kernel.value(s) / config.bandwidth;
  if (base == 0.0) return out;
  double power = 1.0;
  for (int m = 0; m <= d; ++m) {
    out(m) = power * base;
    power *= s;
  }
  return out;
}

Eigen::MatrixXd design_matrix(const LocalPolyConfig& config, const Dataset& data, double x) {
  config.validate();
  const int d = config.order;
  std::vector<double> moments(2 * d + 1, 0.0);
  for (double zj : data.z) {
    const double s = (zj - x) / config.bandwidth;
    const double base = config.kernel.value(s) / config.bandwidth;
    if (base == 0.0) continue;
    double power = 1.0;
    for (int m = 0; m <= 2 * d; ++m) {
      moments[m] += power * base;
      power *= s;
    }
  }
  const double n = static_cast<double>(data.size());
  Eigen::MatrixXd q(d + 1, d + 1);
  for (int k = 0; k <= d; ++k)
    for (int m = 0; m <= d; ++m) q(k, m) = moments[k + m] / n;
  return q;
}

LocalPolyFit::LocalPolyFit(LocalPolyConfig config, const Dataset& data)
    : config_(std::move(config)), data_(&data) {
  config_.validate();
  if (data.z.size() != data.y.size() || data.z.empty())
    throw InvalidArgument("dataset must have matching non-empty z and y");
  order_.resize(data.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return data.z[a] < data.z[b]; });
  sorted_z_.reserve(order_.size());
  for (std::size_t i : order_) sorted_z_.push_back(data.z[i]);
  const std::size_t outside = static_cast<std::size_t>(std::count_if(
      data.z.begin(), data.z.end(), [](double v) { return v < 0.0 || v > 1.0; }));
  if (outside > 0)
    warnings_.push_back(std::to_string(outside) + " covariate(s) outside [0,1]");
}

std::pair<std::size_t, std::size_t> LocalPolyFit::window(double x, double h) const {
  auto lo = std::lower_bound(sorted_z_.begin(), sorted_z_.end(), x - h);
  auto hi = std::upper_bound(lo, sorted_z_.end(), x + h);
  return {static_cast<std::size_t>(lo - sorted_z_.begin()),
          static_cast<std::size_t>(hi - sorted_z_.begin())};
}

LocalSolution LocalPolyFit::solve(double x) const {
  const int d = config_.order;
  const int dim = d + 1;
  const double n = static_cast<double>(data_->size());
  const Kernel w = config_.kernel;
  std::vector<double> moments(2 * d + 1);
  Eigen::VectorXd rhs(dim);
  Eigen::MatrixXd q(dim, dim);

  double h = config_.bandwidth;
  for (int attempt = 0; attempt <= config_.max_widenings; ++attempt, h *= config_.bandwidth_growth) {
    std::fill(moments.begin(), moments.end(), 0.0);
    rhs.setZero();
    const auto [lo, hi] = window(x, h);
    for (std::size_t k = lo; k < hi; ++k) {
      const double s = (sorted_z_[k] - x) / h;
      const double base = w.value(s) / h;
      if (base == 0.0) continue;
      const double yj = data_->y[order_[k]];
      double power = 1.0;
      for (int m = 0; m <= 2 * d; ++m) {
        moments[m] += power * base;
        if (m <= d) rhs(m) += power * base * yj;
        power *= s;
      }
    }
    for (int k = 0; k <= d; ++k)
      for (int m = 0; m <= d; ++m) q(k, m) = moments[k + m] / n;
    rhs /= n;

    if (moments[0] <= 0.0) continue;
    // Eigen's rcond() is only an estimate and is fooled by exact zero pivots;
    // the matrix is at most 4x4, so take the exact 1-norm condition number.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(q);
    if ((lu.matrixLU().diagonal().array() == 0.0).any()) continue;
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) continue;
    const double rcond = 1.0 / (q.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff());
    if (!(rcond >= 1.0 / config_.condition_cap)) continue;

    LocalSolution sol;
    sol.beta = lu.solve(rhs);
    sol.p = inv.col(0);
    sol.bandwidth = h;
    sol.widenings = attempt;
    return sol;
  }
  throw SingularDesign(x);
}

std::vector<double> LocalPolyFit::smoothing_weights(double x) const {
  const LocalSolution sol = solve(x);
  const int d = config_.order;
  const double h = sol.bandwidth;
  std::vector<double> a(data_->size(), 0.0);
  const auto [lo, hi] = window(x, h);
  for (std::size_t k = lo; k < hi; ++k) {
    const double s = (sorted_z_[k] - x) / h;
    const double base = config_.kernel.value(s) / h;
    if (base == 0.0) continue;
    double power = 1.0;
    double acc = 0.0;
    for (int m = 0; m <= d; ++m) {
      acc += sol.p(m) * power * base;
      power *= s;
    }
    a[order_[k]] = acc;
  }
  return a;
}

std::vector<double> LocalPolyFit::residuals() const {
  const std::size_t n = data_->size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = data_->y[i] - predict(data_->z[i]);
    } catch (const SingularDesign& e) {
      throw SingularDesign(e.x(), i);
    }
  }
  return out;
}

Eigen::VectorXd local_fit(const LocalPolyConfig& config, const Dataset& data, double x) {
  return LocalPolyFit(config, data).coefficients(x);
}

std::vector<double> smoothing_weights(const LocalPolyConfig& config, const Dataset& data,
                                      double x) {
  return LocalPolyFit(config, data).smoothing_weights(x);
}

}  // namespace errdist
