#include "errdist/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "errdist/config.hpp"
#include "errdist/estimators.hpp"
#include "errdist/localpoly.hpp"
#include "errdist/models.hpp"
#include "errdist/montecarlo.hpp"

namespace errdist::cli {
namespace fs = std::filesystem;

namespace {

class OutputError : public Error {
 public:
  using Error::Error;
};

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw OutputError("write failed for '" + path + "'");
}

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  return s;
}

bool parse_field(const std::string& field, double& out) {
  std::size_t b = field.find_first_not_of(" \t");
  std::size_t e = field.find_last_not_of(" \t");
  if (b == std::string::npos) return false;
  const char* first = field.data() + b;
  const char* last = field.data() + e + 1;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

struct CsvInput {
  std::vector<double> z, y;
};

CsvInput read_zy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "z,y")
    throw ConfigError(path + ":1: expected header \"z,y\"");
  CsvInput data;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double z = 0.0, y = 0.0;
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos ||
        !parse_field(line.substr(0, comma), z) || !parse_field(line.substr(comma + 1), y))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numeric fields z,y");
    data.z.push_back(z);
    data.y.push_back(y);
  }
  return data;
}

std::string manifest_text(const std::string& run_section, const std::string& body,
                          const std::vector<std::pair<std::string, std::string>>& artifacts) {
  std::ostringstream os;
  os << "# errdist run manifest\n[run]\n" << run_section << "\n" << body;
  os << "\n[artifacts]\n";
  for (const auto& [key, path] : artifacts) os << key << " = " << path << "\n";
  return os.str();
}

std::string report_csv(const MonteCarloReport& r) {
  std::ostringstream os;
  os << "t,estimator,emp_mean,emp_var,theory_var\n";
  for (const auto& s : r.per_t)
    os << format_number(s.t) << ',' << estimator_name(s.estimator) << ',' << format_number(s.emp_mean)
       << ',' << format_number(s.emp_var) << ',' << format_number(s.theory_var) << '\n';
  return os.str();
}

constexpr const char* kRemainderHeader = "n,median_remainder,q90_remainder,failures\n";

std::string remainder_row(std::size_t n, double median, double q90, std::size_t failures) {
  return std::to_string(n) + ',' + format_number(median) + ',' + format_number(q90) + ',' +
         std::to_string(failures) + '\n';
}

}  // namespace

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ERRDIST_THREADS")) {
    unsigned v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  return 0;
}

int cmd_estimate(const EstimateOptions& opts, std::ostream& log) {
  CsvInput input;
  Kernel smoothing, regression_kernel;
  try {
    input = read_zy_csv(opts.input);
    if (input.z.size() < 10) throw ConfigError("need at least 10 observations, got " + std::to_string(input.z.size()));
    if (opts.grid_points < 2) throw ConfigError("--grid-points must be >= 2");
    if (opts.order < 0) throw ConfigError("--order must be >= 0");
    if (!(opts.a_const > 0.0) || !(opts.c_const > 0.0)) throw ConfigError("bandwidth constants must be positive");
    smoothing = Kernel::from_name(opts.kernel);
    regression_kernel = Kernel::from_name(opts.regression_kernel);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }

  const std::size_t n = input.z.size();
  const Dataset data(input.z, input.y);
  const Bandwidths bw = bandwidths({opts.a_const, opts.c_const}, n);
  LocalPolyConfig lp;
  lp.order = opts.order;
  lp.bandwidth = bw.c_n;
  lp.kernel = regression_kernel;

  std::vector<double> rhat(n), res;
  try {
    const LocalPolyFit fit(lp, data);
    for (const auto& w : fit.warnings()) log << "warning: " << w << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      try {
        rhat[i] = fit.predict(data.z[i]);
      } catch (const SingularDesign& e) {
        throw SingularDesign(e.x(), i);
      }
    }
  } catch (const SingularDesign& e) {
    log << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  res.resize(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = data.y[i] - rhat[i];

  const SmoothedEdf fstar(res, bw.a_n, smoothing);
  const EdfCurve edf(res);
  std::ostringstream residual_csv, curve_csv;
  residual_csv << "i,z,y,rhat,residual\n";
  for (std::size_t i = 0; i < n; ++i)
    residual_csv << i << ',' << format_number(data.z[i]) << ',' << format_number(data.y[i]) << ','
                 << format_number(rhat[i]) << ',' << format_number(res[i]) << '\n';
  const auto [mn, mx] = std::minmax_element(res.begin(), res.end());
  const double lo = *mn - bw.a_n, hi = *mx + bw.a_n;
  curve_csv << "t,Fhat_star,f_star,residual_edf\n";
  for (std::size_t k = 0; k < opts.grid_points; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opts.grid_points - 1);
    curve_csv << format_number(t) << ',' << format_number(fstar.eval(t)) << ','
              << format_number(fstar.density(t)) << ',' << format_number(edf.eval(t)) << '\n';
  }

  try {
    ensure_dir(opts.out_dir);
    const std::string residual_path = join_path(opts.out_dir, "residuals.csv");
    const std::string curve_path = join_path(opts.out_dir, "curve.csv");
    write_file(residual_path, residual_csv.str());
    write_file(curve_path, curve_csv.str());
    std::ostringstream run;
    run << "command = estimate\nversion = " << kVersion << "\ninput = " << opts.input
        << "\nn = " << n << "\norder = " << opts.order << "\na_const = " << format_number(opts.a_const)
        << "\nc_const = " << format_number(opts.c_const) << "\na_n = " << format_number(bw.a_n)
        << "\nc_n = " << format_number(bw.c_n) << "\nkernel = " << smoothing.name()
        << "\nregression_kernel = " << regression_kernel.name() << "\ngrid_points = " << opts.grid_points
        << "\n";
    write_file(join_path(opts.out_dir, "manifest.txt"),
               manifest_text(run.str(), "", {{"residuals", residual_path}, {"curve", curve_path}}));
  } catch (const OutputError& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

int cmd_variance_table(const VarianceTableOptions& opts, std::ostream& out, std::ostream& log) {
  std::optional<ErrorModel> model;
  try {
    if (opts.error == "normal") model = ErrorModel::normal(opts.scale);
    else if (opts.error == "student_t") model = ErrorModel::student_t(opts.df, opts.scale);
    else if (opts.error == "uniform") model = ErrorModel::uniform(opts.half_width);
    else throw InvalidArgument("unknown error model '" + opts.error + "'");
    if (opts.t_points < 1) throw InvalidArgument("--t-points must be >= 1");
    if (!(opts.t_max >= opts.t_min)) throw InvalidArgument("--t-max must be >= --t-min");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  std::ostringstream os;
  os << "t,var_empirical,var_smoothed,var_efficient_meanzero,variance_gap\n";
  for (std::size_t k = 0; k < opts.t_points; ++k) {
    const double t = opts.t_points == 1
                         ? opts.t_min
                         : opts.t_min + (opts.t_max - opts.t_min) * static_cast<double>(k) /
                                            static_cast<double>(opts.t_points - 1);
    os << format_number(t) << ',' << format_number(var_empirical(*model, t)) << ','
       << format_number(var_smoothed(*model, t)) << ',' << format_number(var_efficient_meanzero(*model, t))
       << ',' << format_number(variance_gap(*model, t)) << '\n';
  }
  if (opts.out.empty()) {
    out << os.str();
    return kSuccess;
  }
  try {
    write_file(opts.out, os.str());
  } catch (const OutputError& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& log) {
  SimulationSetup setup;
  try {
    setup = setup_from_ini(load_ini(opts.config_path));
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  MonteCarloReport report;
  try {
    report = run_monte_carlo(setup.scenario, opts.threads);
  } catch (const AllReplicationsFailed& e) {
    log << "error: " << e.what() << "\n";
    return kSimulationCollapse;
  }
  if (!report.variance_defined)
    log << "warning: fewer than two successful replications; variances are undefined (nan)\n";
  if (report.failures > 0)
    log << "warning: " << report.failures << " of " << report.replications << " replications failed\n";

  try {
    ensure_dir(opts.out_dir);
    const std::string report_path = join_path(opts.out_dir, "report.csv");
    const std::string remainder_path = join_path(opts.out_dir, "remainder.csv");
    write_file(report_path, report_csv(report));
    write_file(remainder_path, kRemainderHeader + remainder_row(report.n, report.median_remainder,
                                                                report.q90_remainder, report.failures));
    std::ostringstream run;
    run << "command = simulate\nversion = " << kVersion << "\nconfig_path = " << opts.config_path
        << "\nmaster_seed = " << setup.scenario.seed << "\nsuccesses = " << report.successes
        << "\nfailures = " << report.failures << "\n";
    write_file(join_path(opts.out_dir, "manifest.txt"),
               manifest_text(run.str(), setup_to_ini(setup),
                             {{"report", report_path}, {"remainder", remainder_path}}));
  } catch (const OutputError& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

int cmd_convergence(const ConvergenceOptions& opts, std::ostream& log) {
  SimulationSetup setup;
  try {
    setup = setup_from_ini(load_ini(opts.config_path));
    if (!opts.sizes.empty()) {
      setup.sizes.clear();
      for (double s : parse_number_list(opts.sizes)) {
        if (s < 2 || s != std::floor(s)) throw ConfigError("--sizes entries must be integers >= 2");
        setup.sizes.push_back(static_cast<std::size_t>(s));
      }
    }
    if (setup.sizes.size() < 2) throw ConfigError("convergence study needs at least two sizes");
    if (!std::is_sorted(setup.sizes.begin(), setup.sizes.end())) {
      log << "warning: sizes were not sorted; running them in ascending order\n";
      std::sort(setup.sizes.begin(), setup.sizes.end());
    }
    if (std::adjacent_find(setup.sizes.begin(), setup.sizes.end()) != setup.sizes.end())
      throw ConfigError("duplicate sample sizes");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }

  std::vector<ConvergenceRow> rows;
  try {
    rows = convergence_study(setup.scenario, setup.sizes, opts.threads);
  } catch (const AllReplicationsFailed& e) {
    log << "error: " << e.what() << "\n";
    return kSimulationCollapse;
  }

  try {
    ensure_dir(opts.out_dir);
    const std::string path = join_path(opts.out_dir, "convergence.csv");
    std::string csv = kRemainderHeader;
    for (const auto& r : rows) csv += remainder_row(r.n, r.median_remainder, r.q90_remainder, r.failures);
    write_file(path, csv);
    std::ostringstream run;
    run << "command = convergence\nversion = " << kVersion << "\nconfig_path = " << opts.config_path
        << "\nmaster_seed = " << setup.scenario.seed << "\n";
    write_file(join_path(opts.out_dir, "manifest.txt"),
               manifest_text(run.str(), setup_to_ini(setup), {{"convergence", path}}));
  } catch (const OutputError& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

int run(int argc, char** argv) {
  CLI::App app{"errdist: residual-based estimation of the error distribution in nonparametric regression"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Fit the local polynomial smoother and estimate F from residuals");
  estimate->add_option("input", est.input, "CSV with header z,y")->required();
  estimate->add_option("--out-dir", est.out_dir, "Output directory")->capture_default_str();
  estimate->add_option("--order", est.order, "Local polynomial order d")->capture_default_str();
  estimate->add_option("--a-const", est.a_const, "a_n = a_const n^{-1/4} / ln n")->capture_default_str();
  estimate->add_option("--c-const", est.c_const, "c_n = c_const n^{-1/4}")->capture_default_str();
  estimate->add_option("--grid-points", est.grid_points, "Points in the output curve")->capture_default_str();
  estimate->add_option("--kernel", est.kernel, "Smoothing kernel")->capture_default_str();
  estimate->add_option("--regression-kernel", est.regression_kernel, "Local regression kernel")->capture_default_str();

  VarianceTableOptions vt;
  auto* variance = app.add_subcommand("variance-table", "Tabulate asymptotic variances over a t grid");
  variance->add_option("--error", vt.error, "normal | student_t | uniform")->capture_default_str();
  variance->add_option("--scale", vt.scale, "Scale of normal / student_t")->capture_default_str();
  variance->add_option("--df", vt.df, "Student-t degrees of freedom (>= 4.5)")->capture_default_str();
  variance->add_option("--half-width", vt.half_width, "Uniform half width b")->capture_default_str();
  variance->add_option("--t-min", vt.t_min)->capture_default_str();
  variance->add_option("--t-max", vt.t_max)->capture_default_str();
  variance->add_option("--t-points", vt.t_points)->capture_default_str();
  variance->add_option("--out", vt.out, "Output CSV (default: stdout)");

  SimulateOptions sim;
  std::optional<unsigned> sim_threads;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of all estimators");
  simulate->add_option("config", sim.config_path, "INI scenario config")->required();
  simulate->add_option("--out-dir", sim.out_dir)->capture_default_str();
  simulate->add_option("--threads", sim_threads, "Worker threads (default: $ERRDIST_THREADS or all cores)");

  ConvergenceOptions conv;
  std::optional<unsigned> conv_threads;
  auto* convergence = app.add_subcommand("convergence", "Remainder shrinkage across sample sizes");
  convergence->add_option("config", conv.config_path, "INI scenario config")->required();
  convergence->add_option("--sizes", conv.sizes, "Comma-separated sample sizes (default: [grids] sizes)");
  convergence->add_option("--out-dir", conv.out_dir)->capture_default_str();
  convergence->add_option("--threads", conv_threads, "Worker threads (default: $ERRDIST_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kInputError;
  }

  if (*estimate) return cmd_estimate(est, std::cerr);
  if (*variance) return cmd_variance_table(vt, std::cout, std::cerr);
  if (*simulate) {
    sim.threads = resolve_threads(sim_threads);
    return cmd_simulate(sim, std::cerr);
  }
  conv.threads = resolve_threads(conv_threads);
  return cmd_convergence(conv, std::cerr);
}

}  // namespace errdist::cli
