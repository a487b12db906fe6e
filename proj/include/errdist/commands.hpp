#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace errdist::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kNumericalFailure = 3,
  kSimulationCollapse = 4,
};

struct EstimateOptions {
  std::string input;
  std::string out_dir = ".";
  int order = 2;
  double a_const = 1.0;
  double c_const = 1.0;
  std::size_t grid_points = 512;
  std::string kernel = "triweight";
  std::string regression_kernel = "epanechnikov";
};

struct VarianceTableOptions {
  std::string error = "normal";
  double scale = 1.0;
  double df = 5.0;
  double half_width = 1.0;
  double t_min = -3.0;
  double t_max = 3.0;
  std::size_t t_points = 61;
  std::string out;  // empty: write to the output stream
};

struct SimulateOptions {
  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
};

struct ConvergenceOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string sizes;  // comma separated; empty: [grids] sizes from the config
  unsigned threads = 0;
};

/// Writes residuals.csv, curve.csv and manifest.txt into out_dir.
int cmd_estimate(const EstimateOptions& opts, std::ostream& log);
int cmd_variance_table(const VarianceTableOptions& opts, std::ostream& out, std::ostream& log);
/// Writes report.csv, remainder.csv and manifest.txt into out_dir.
int cmd_simulate(const SimulateOptions& opts, std::ostream& log);
/// Writes convergence.csv and manifest.txt into out_dir.
int cmd_convergence(const ConvergenceOptions& opts, std::ostream& log);

/// --threads, else ERRDIST_THREADS, else hardware concurrency (0).
unsigned resolve_threads(std::optional<unsigned> flag);

int run(int argc, char** argv);

}  // namespace errdist::cli
