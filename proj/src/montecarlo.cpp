#include "errdist/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "errdist/errors.hpp"
#include "errdist/rng.hpp"

namespace errdist {

std::string_view estimator_name(Estimator e) noexcept {
  switch (e) {
    case Estimator::oracle_edf: return "oracle_edf";
    case Estimator::residual_edf: return "residual_edf";
    case Estimator::smoothed: return "smoothed";
    case Estimator::meanzero_corrected: return "meanzero_corrected";
    case Estimator::empirical_likelihood: return "empirical_likelihood";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  if (n < 2) throw InvalidArgument("scenario n must be >= 2");
  if (replications < 1) throw InvalidArgument("replications must be >= 1");
  if (order < 0) throw InvalidArgument("order must be >= 0");
  if (t_grid.empty()) throw InvalidArgument("t_grid must not be empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw InvalidArgument("t_grid must be sorted ascending");
  for (double t : t_grid)
    if (!std::isfinite(t)) throw InvalidArgument("t_grid entries must be finite");
  if (sup_grid_size < 2) throw InvalidArgument("sup_grid_size must be >= 2");
  if (!(schedule.a_constant > 0.0) || !(schedule.c_constant > 0.0))
    throw InvalidArgument("bandwidth constants must be positive");
  if (error.test_only())
    throw InvalidArgument("error model '" + error.name() +
                          "' has a non-Lipschitz density and is not allowed in simulations");
  if (smoothing_kernel.family() != KernelFamily::triweight &&
      smoothing_kernel.family() != KernelFamily::epanechnikov)
    throw InvalidArgument("smoothing kernel must be triweight or epanechnikov");
}

LocalPolyConfig ScenarioConfig::smoother_config() const {
  LocalPolyConfig c;
  c.order = order;
  c.bandwidth = bandwidths(schedule, n).c_n;
  c.kernel = regression_kernel;
  return c;
}

double expansion_remainder(std::span<const double> residuals, std::span<const double> true_errors,
                           double a_n, Kernel kernel, const ErrorModel& model,
                           std::size_t grid_size) {
  if (true_errors.empty() || residuals.size() != true_errors.size())
    throw InvalidArgument("expansion_remainder: residuals and true errors must match in length");
  if (grid_size < 2) throw InvalidArgument("expansion_remainder: grid_size must be >= 2");
  const std::size_t n = true_errors.size();
  const SmoothedEdf fstar(std::vector<double>(residuals.begin(), residuals.end()), a_n, kernel);
  const EdfCurve oracle(std::vector<double>(true_errors.begin(), true_errors.end()));
  const double mean =
      std::accumulate(true_errors.begin(), true_errors.end(), 0.0) / static_cast<double>(n);
  auto continuous = [&](double t) { return fstar.eval(t) - model.density(t) * mean; };

  double sup = 0.0;
  for (double e : true_errors) {
    const double c = continuous(e);
    sup = std::max({sup, std::abs(c - oracle.eval(e)), std::abs(c - oracle.eval_left(e))});
  }
  const auto [emin, emax] = std::minmax_element(true_errors.begin(), true_errors.end());
  const auto [rmin, rmax] = std::minmax_element(residuals.begin(), residuals.end());
  const double lo = std::min(*emin, *rmin) - 3.0 * a_n;
  const double hi = std::max(*emax, *rmax) + 3.0 * a_n;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double t = lo + step * static_cast<double>(k);
    sup = std::max(sup, std::abs(continuous(t) - oracle.eval(t)));
  }
  return std::sqrt(static_cast<double>(n)) * sup;
}

double expansion_remainder(const Dataset& data, const ScenarioConfig& config) {
  if (!data.true_errors) throw InvalidArgument("expansion_remainder needs true errors");
  const Bandwidths bw = bandwidths(config.schedule, data.size());
  LocalPolyConfig lp = config.smoother_config();
  lp.bandwidth = bw.c_n;
  const LocalPolyFit fit(lp, data);
  const std::vector<double> res = fit.residuals();
  return expansion_remainder(res, *data.true_errors, bw.a_n, config.smoothing_kernel, config.error,
                             config.sup_grid_size);
}

ReplicationResult run_replication(const ScenarioConfig& config, std::size_t rep_index) {
  if (rep_index >= config.replications) throw InvalidArgument("rep_index out of range");
  ReplicationResult out;
  out.index = rep_index;
  try {
    const Dataset data = sample_scenario(config.covariate, config.regression, config.error, config.n,
                                         derive_seed(config.seed, rep_index));
    const std::vector<double>& errors = *data.true_errors;
    const Bandwidths bw = bandwidths(config.schedule, config.n);
    LocalPolyConfig lp = config.smoother_config();
    lp.bandwidth = bw.c_n;
    const LocalPolyFit fit(lp, data);
    const std::vector<double> res = fit.residuals();

    const EdfCurve oracle(errors);
    const EdfCurve residual_edf(res);
    const SmoothedEdf fstar(res, bw.a_n, config.smoothing_kernel);
    const MeanZeroCorrected corrected(errors);
    const ElSolution el = el_solve(errors);

    for (auto& v : out.values) v.reserve(config.t_grid.size());
    for (double t : config.t_grid) {
      out.values[0].push_back(oracle.eval(t));
      out.values[1].push_back(residual_edf.eval(t));
      out.values[2].push_back(fstar.eval(t));
      out.values[3].push_back(corrected.eval(t));
      out.values[4].push_back(el_cdf_eval(errors, el.weights, t));
    }
    out.remainder = expansion_remainder(res, errors, bw.a_n, config.smoothing_kernel, config.error,
                                        config.sup_grid_size);
    out.ok = true;
  } catch (const SingularDesign& e) {
    out.failure = std::string("SingularDesign: ") + e.what();
  } catch (const InfeasibleConstraint& e) {
    out.failure = std::string("InfeasibleConstraint: ") + e.what();
  } catch (const NumericalFailure& e) {
    out.failure = std::string("NumericalFailure: ") + e.what();
  } catch (const DegenerateErrors& e) {
    out.failure = std::string("DegenerateErrors: ") + e.what();
  }
  if (!out.ok) {
    for (auto& v : out.values) v.clear();
  }
  return out;
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const auto m = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * m));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

std::vector<ReplicationResult> run_all(const ScenarioConfig& config, unsigned threads) {
  std::vector<ReplicationResult> results(config.replications);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.replications));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.replications; i = next++)
      results[i] = run_replication(config, i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace

MonteCarloReport run_monte_carlo(const ScenarioConfig& config, unsigned threads) {
  config.validate();
  const std::vector<ReplicationResult> results = run_all(config, threads);

  MonteCarloReport report;
  report.n = config.n;
  report.replications = config.replications;
  report.t_grid = config.t_grid;
  std::vector<const ReplicationResult*> good;
  for (const auto& r : results) {
    if (r.ok) {
      good.push_back(&r);
      report.remainders.push_back(r.remainder);
    } else {
      report.failure_messages.push_back("replication " + std::to_string(r.index) + ": " + r.failure);
    }
  }
  report.successes = good.size();
  report.failures = results.size() - good.size();
  if (good.empty()) throw AllReplicationsFailed("all " + std::to_string(results.size()) +
                                                " replications failed");
  report.variance_defined = good.size() >= 2;

  const double root_n = std::sqrt(static_cast<double>(config.n));
  const double m = static_cast<double>(good.size());
  for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
    const double t = config.t_grid[ti];
    const double F = config.error.cdf(t);
    const double v_emp = var_empirical(config.error, t);
    const double v_smooth = var_smoothed(config.error, t);
    const double v_eff = var_efficient_meanzero(config.error, t);
    report.theory_empirical.push_back(v_emp);
    report.theory_smoothed.push_back(v_smooth);
    report.theory_efficient.push_back(v_eff);
    for (Estimator e : kAllEstimators) {
      const auto idx = static_cast<std::size_t>(e);
      double sum = 0.0;
      for (const auto* r : good) sum += root_n * (r->values[idx][ti] - F);
      const double mean = sum / m;
      double ss = 0.0;
      for (const auto* r : good) {
        const double d = root_n * (r->values[idx][ti] - F) - mean;
        ss += d * d;
      }
      const double var = report.variance_defined ? ss / (m - 1.0)
                                                 : std::numeric_limits<double>::quiet_NaN();
      double theory = v_emp;
      if (e == Estimator::residual_edf || e == Estimator::smoothed) theory = v_smooth;
      if (e == Estimator::meanzero_corrected || e == Estimator::empirical_likelihood) theory = v_eff;
      report.per_t.push_back({t, e, mean, var, theory});
    }
  }
  report.median_remainder = nearest_rank_quantile(report.remainders, 0.5);
  report.q90_remainder = nearest_rank_quantile(report.remainders, 0.9);
  return report;
}

std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              std::span<const std::size_t> sizes,
                                              unsigned threads) {
  if (sizes.size() < 2) throw InvalidArgument("convergence study needs at least two sample sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (!(sizes[i] > sizes[i - 1]))
      throw InvalidArgument("sample sizes must be strictly increasing");
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : sizes) {
    ScenarioConfig c = config;
    c.n = n;
    const MonteCarloReport r = run_monte_carlo(c, threads);
    rows.push_back({n, r.median_remainder, r.q90_remainder, r.failures});
  }
  return rows;
}

}  // namespace errdist
