#include "errdist/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace errdist {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kIgnoredSections = {"run", "artifacts"};
const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"scenario",
     {"n", "replications", "seed", "order", "covariate", "covariate_alpha", "regression",
      "regression_coefficients", "regression_amplitude", "regression_frequency", "error",
      "error_scale", "error_df", "error_half_width", "smoothing_kernel", "regression_kernel"}},
    {"bandwidths", {"a_const", "c_const"}},
    {"grids", {"t_grid", "t_min", "t_max", "t_points", "sup_grid_size", "sizes"}},
};

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' must be a non-negative integer, got '" + text + "'");
  return v;
}

}  // namespace

const std::string* IniDocument::find(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

IniDocument parse_ini(std::istream& in, const std::string& source) {
  IniDocument doc;
  std::string current;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(source + ":" + std::to_string(lineno) + ": bad section header");
      current = trim(t.substr(1, t.size() - 2));
      doc.sections[current];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    if (current.empty())
      throw ConfigError(source + ":" + std::to_string(lineno) + ": key outside of a section");
    std::string value = trim(t.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    const std::string key = trim(t.substr(0, eq));
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!doc.sections[current].emplace(key, value).second)
      throw ConfigError(where + "duplicate key '" + key + "' in [" + current + "]");
  }
  return doc;
}

IniDocument load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_ini(in, path);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("not a finite number: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

SimulationSetup setup_from_ini(const IniDocument& doc) {
  for (const auto& [name, keys] : doc.sections) {
    if (kIgnoredSections.contains(name)) continue;
    const auto known = kKnownKeys.find(name);
    if (known == kKnownKeys.end()) throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, value] : keys)
      if (!known->second.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
  }
  auto get = [&](const std::string& sec, const std::string& key) { return doc.find(sec, key); };
  auto number = [&](const std::string& sec, const std::string& key, double fallback) {
    const std::string* v = get(sec, key);
    return v ? parse_number(*v) : fallback;
  };

  SimulationSetup setup;
  ScenarioConfig& c = setup.scenario;
  try {
    if (const auto* v = get("scenario", "n")) c.n = parse_unsigned("n", *v);
    if (const auto* v = get("scenario", "replications")) c.replications = parse_unsigned("replications", *v);
    if (const auto* v = get("scenario", "seed")) c.seed = parse_unsigned("seed", *v);
    if (const auto* v = get("scenario", "order")) c.order = static_cast<int>(parse_unsigned("order", *v));

    const std::string* cov = get("scenario", "covariate");
    if (!cov || *cov == "uniform") {
      c.covariate = CovariateModel::uniform();
    } else if (*cov == "linear") {
      c.covariate = CovariateModel::linear(number("scenario", "covariate_alpha", 1.0));
    } else {
      throw ConfigError("unknown covariate model '" + *cov + "'");
    }

    const std::string* reg = get("scenario", "regression");
    if (!reg || *reg == "polynomial") {
      if (const auto* v = get("scenario", "regression_coefficients"))
        c.regression = RegressionModel::polynomial(parse_number_list(*v));
    } else if (*reg == "sinusoid") {
      c.regression = RegressionModel::sinusoid(number("scenario", "regression_amplitude", 1.0),
                                               number("scenario", "regression_frequency", 1.0));
    } else {
      throw ConfigError("unknown regression model '" + *reg + "'");
    }

    const std::string* err = get("scenario", "error");
    const double scale = number("scenario", "error_scale", 1.0);
    if (!err || *err == "normal") {
      c.error = ErrorModel::normal(scale);
    } else if (*err == "student_t") {
      c.error = ErrorModel::student_t(number("scenario", "error_df", 5.0), scale);
    } else if (*err == "uniform") {
      c.error = ErrorModel::uniform(number("scenario", "error_half_width", 1.0));
    } else {
      throw ConfigError("unknown error model '" + *err + "'");
    }

    if (const auto* v = get("scenario", "smoothing_kernel")) c.smoothing_kernel = Kernel::from_name(*v);
    if (const auto* v = get("scenario", "regression_kernel")) c.regression_kernel = Kernel::from_name(*v);

    c.schedule.a_constant = number("bandwidths", "a_const", 1.0);
    c.schedule.c_constant = number("bandwidths", "c_const", 1.0);

    if (const auto* v = get("grids", "t_grid")) {
      c.t_grid = parse_number_list(*v);
    } else if (get("grids", "t_min") || get("grids", "t_max") || get("grids", "t_points")) {
      const double lo = number("grids", "t_min", -2.0);
      const double hi = number("grids", "t_max", 2.0);
      const auto* pts = get("grids", "t_points");
      const std::uint64_t k = pts ? parse_unsigned("t_points", *pts) : 9;
      if (k < 1) throw ConfigError("t_points must be >= 1");
      c.t_grid.clear();
      for (std::uint64_t i = 0; i < k; ++i)
        c.t_grid.push_back(k == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
    }
    if (const auto* v = get("grids", "sup_grid_size")) c.sup_grid_size = parse_unsigned("sup_grid_size", *v);
    if (const auto* v = get("grids", "sizes")) {
      for (double s : parse_number_list(*v)) {
        if (s < 2 || s != std::floor(s)) throw ConfigError("sizes must be integers >= 2");
        setup.sizes.push_back(static_cast<std::size_t>(s));
      }
    }
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return setup;
}

std::string setup_to_ini(const SimulationSetup& setup) {
  const ScenarioConfig& c = setup.scenario;
  auto join = [](const auto& values, auto fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      out += fmt(values[i]);
    }
    return out;
  };
  std::ostringstream os;
  os << "[scenario]\n";
  os << "n = " << c.n << "\n";
  os << "replications = " << c.replications << "\n";
  os << "seed = " << c.seed << "\n";
  os << "order = " << c.order << "\n";
  if (c.covariate.family() == CovariateFamily::uniform) {
    os << "covariate = uniform\n";
  } else {
    os << "covariate = linear\n";
    os << "covariate_alpha = " << format_number(c.covariate.alpha()) << "\n";
  }
  if (c.regression.family() == RegressionFamily::polynomial) {
    os << "regression = polynomial\n";
    os << "regression_coefficients = " << join(c.regression.coefficients(), format_number) << "\n";
  } else {
    os << "regression = sinusoid\n";
    os << "regression_amplitude = " << format_number(c.regression.coefficients()[0]) << "\n";
    os << "regression_frequency = " << format_number(c.regression.coefficients()[1]) << "\n";
  }
  os << "error = " << c.error.name() << "\n";
  switch (c.error.family()) {
    case ErrorFamily::normal: os << "error_scale = " << format_number(c.error.scale()) << "\n"; break;
    case ErrorFamily::student_t:
      os << "error_scale = " << format_number(c.error.scale()) << "\n";
      os << "error_df = " << format_number(c.error.df()) << "\n";
      break;
    case ErrorFamily::uniform: os << "error_half_width = " << format_number(c.error.scale()) << "\n"; break;
  }
  os << "smoothing_kernel = " << c.smoothing_kernel.name() << "\n";
  os << "regression_kernel = " << c.regression_kernel.name() << "\n";
  os << "\n[bandwidths]\n";
  os << "a_const = " << format_number(c.schedule.a_constant) << "\n";
  os << "c_const = " << format_number(c.schedule.c_constant) << "\n";
  os << "\n[grids]\n";
  os << "t_grid = " << join(c.t_grid, format_number) << "\n";
  os << "sup_grid_size = " << c.sup_grid_size << "\n";
  if (!setup.sizes.empty())
    os << "sizes = " << join(setup.sizes, [](std::size_t s) { return std::to_string(s); }) << "\n";
  return os.str();
}

}  // namespace errdist
