#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errdist/estimators.hpp"
#include "errdist/kernels.hpp"
#include "errdist/localpoly.hpp"
#include "errdist/models.hpp"

namespace errdist {

enum class Estimator : std::size_t {
  oracle_edf,            // EDF of the true errors
  residual_edf,          // EDF of the residuals
  smoothed,              // kernel-smoothed residual EDF
  meanzero_corrected,    // EDF - C0_hat * mean, on the true errors
  empirical_likelihood,  // EL-weighted EDF, on the true errors
};
inline constexpr std::size_t kEstimatorCount = 5;
inline constexpr std::array<Estimator, kEstimatorCount> kAllEstimators = {
    Estimator::oracle_edf, Estimator::residual_edf, Estimator::smoothed,
    Estimator::meanzero_corrected, Estimator::empirical_likelihood};

std::string_view estimator_name(Estimator e) noexcept;

struct ScenarioConfig {
  std::size_t n = 200;
  std::size_t replications = 100;
  CovariateModel covariate = CovariateModel::uniform();
  RegressionModel regression = RegressionModel::polynomial({1.0, 1.0, -2.0});
  ErrorModel error = ErrorModel::normal(1.0);
  BandwidthSchedule schedule{};
  int order = 2;
  std::uint64_t seed = 20040101;
  std::vector<double> t_grid{0.0};
  std::size_t sup_grid_size = 2048;
  Kernel smoothing_kernel = Kernel::triweight();
  Kernel regression_kernel = Kernel::epanechnikov();

  /// Throws InvalidArgument; rejects test-only error laws.
  void validate() const;
  LocalPolyConfig smoother_config() const;
};

/// sqrt(n) sup_t |F*(t) - EDF_true(t) - f(t) mean(true errors)|.
///
/// The step function EDF_true jumps only at the true errors, so the sup is
/// checked at each error from both sides, plus a uniform grid of `grid_size`
/// points over [min - 3a, max + 3a] for the continuous part. `residuals` may be
/// anything (tests inject the true errors to pin r_hat = r).
double expansion_remainder(std::span<const double> residuals, std::span<const double> true_errors,
                           double a_n, Kernel kernel, const ErrorModel& model,
                           std::size_t grid_size);

/// Fits the smoother to `data` with the scenario's bandwidths, then as above.
double expansion_remainder(const Dataset& data, const ScenarioConfig& config);

struct ReplicationResult {
  std::size_t index = 0;
  bool ok = false;
  std::string failure;  // set when !ok
  /// Raw estimates on config.t_grid, indexed by Estimator.
  std::array<std::vector<double>, kEstimatorCount> values;
  double remainder = 0.0;
};

/// One simulated dataset with seed derive_seed(config.seed, rep_index). Numerical
/// failures are returned as a tagged record rather than thrown.
ReplicationResult run_replication(const ScenarioConfig& config, std::size_t rep_index);

struct EstimatorStats {
  double t;
  Estimator estimator;
  double emp_mean;    // of sqrt(n)(estimate - F(t))
  double emp_var;     // unbiased; NaN with fewer than two successes
  double theory_var;  // asymptotic variance the estimator should reach
};

struct MonteCarloReport {
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  bool variance_defined = false;  // false when fewer than two replications succeeded
  std::vector<double> t_grid;
  std::vector<EstimatorStats> per_t;  // t-major, estimator order of kAllEstimators
  std::vector<double> theory_empirical;
  std::vector<double> theory_smoothed;
  std::vector<double> theory_efficient;
  std::vector<double> remainders;  // successful replications, by index
  double median_remainder = 0.0;
  double q90_remainder = 0.0;
  std::vector<std::string> failure_messages;

  const EstimatorStats& at(std::size_t t_index, Estimator e) const {
    return per_t[t_index * kEstimatorCount + static_cast<std::size_t>(e)];
  }
};

/// Nearest-rank quantile: the ceil(q m)-th smallest of m values.
double nearest_rank_quantile(std::vector<double> values, double q);

/// Runs all replications on `threads` workers (0 = hardware concurrency) and
/// reduces them in replication order, so the report does not depend on the
/// worker count. Throws AllReplicationsFailed.
MonteCarloReport run_monte_carlo(const ScenarioConfig& config, unsigned threads = 0);

struct ConvergenceRow {
  std::size_t n;
  double median_remainder;
  double q90_remainder;
  std::size_t failures;
};

/// run_monte_carlo at each sample size with the same master seed. `sizes` must
/// be strictly increasing with at least two entries.
std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              std::span<const std::size_t> sizes,
                                              unsigned threads = 0);

}  // namespace errdist
