#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errdist/kernels.hpp"

namespace errdist {

/// Paired covariate/response sample. `true_errors` is only set by the simulator.
struct Dataset {
  std::vector<double> z;
  std::vector<double> y;
  std::optional<std::vector<double>> true_errors;

  Dataset() = default;
  /// Validates equal lengths, n >= 1 and finiteness; throws InvalidArgument.
  Dataset(std::vector<double> z, std::vector<double> y,
          std::optional<std::vector<double>> true_errors = std::nullopt);

  std::size_t size() const noexcept { return z.size(); }
};

struct LocalPolyConfig {
  int order = 2;
  double bandwidth = 0.25;
  Kernel kernel = Kernel::epanechnikov();
  double condition_cap = 1e12;
  double bandwidth_growth = 1.5;
  int max_widenings = 10;

  void validate() const;
};

/// (w_n0(u), ..., w_nd(u)) with w_nm(u) = (u/c)^m w(u/c) / c.
Eigen::VectorXd weight_vector(const LocalPolyConfig& config, double u);

/// Q_n(x) straight from its definition: entry (k,m) = (1/n) sum_j w_{n,k+m}(Z_j - x).
Eigen::MatrixXd design_matrix(const LocalPolyConfig& config, const Dataset& data, double x);

/// Solution of the local normal equations at one query point.
struct LocalSolution {
  Eigen::VectorXd beta;       // rescaled basis ((z-x)/h)^m
  Eigen::VectorXd p;          // first column of Q^{-1}
  double bandwidth = 0.0;     // h actually used (>= config.bandwidth after widening)
  int widenings = 0;
};

/// Local polynomial regression fit of order d.
///
/// The fit keeps a reference to the dataset; the dataset must outlive it.
/// Covariates are sorted once so each query only touches the points inside
/// its window. When the local design is too ill-conditioned
/// (rcond < 1/condition_cap) the window is widened by `bandwidth_growth`,
/// at most `max_widenings` times, before SingularDesign is thrown.
class LocalPolyFit {
 public:
  LocalPolyFit(LocalPolyConfig config, const Dataset& data);

  const LocalPolyConfig& config() const noexcept { return config_; }
  const Dataset& dataset() const noexcept { return *data_; }

  LocalSolution solve(double x) const;
  Eigen::VectorXd coefficients(double x) const { return solve(x).beta; }
  double predict(double x) const { return solve(x).beta(0); }

  /// A_n(x, Z_j) for j = 1..n in dataset order; r_hat(x) = (1/n) sum_j A_n(x,Z_j) Y_j.
  std::vector<double> smoothing_weights(double x) const;

  /// Y_i - r_hat(Z_i); SingularDesign carries the offending index.
  std::vector<double> residuals() const;

  /// Notes about accepted-but-unusual input (e.g. covariates outside [0,1]).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  // Indices (into sorted order) of covariates within [x-h, x+h].
  std::pair<std::size_t, std::size_t> window(double x, double h) const;

  LocalPolyConfig config_;
  const Dataset* data_;
  std::vector<std::size_t> order_;  // dataset indices sorted by z
  std::vector<double> sorted_z_;
  std::vector<std::string> warnings_;
};

Eigen::VectorXd local_fit(const LocalPolyConfig& config, const Dataset& data, double x);
std::vector<double> smoothing_weights(const LocalPolyConfig& config, const Dataset& data, double x);

}  // namespace errdist
