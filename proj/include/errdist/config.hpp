#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "errdist/errors.hpp"
#include "errdist/montecarlo.hpp"

namespace errdist {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat INI document: [section] headers, `key = value` lines, `#`/`;` comments.
struct IniDocument {
  std::map<std::string, std::map<std::string, std::string>> sections;

  const std::string* find(const std::string& section, const std::string& key) const;
};

IniDocument parse_ini(std::istream& in, const std::string& source = "<config>");
IniDocument load_ini(const std::string& path);

/// Scenario plus the optional convergence sizes from [grids] sizes.
struct SimulationSetup {
  ScenarioConfig scenario;
  std::vector<std::size_t> sizes;
};

/// Reads [scenario], [bandwidths], [grids]; [run] and [artifacts] (manifest
/// bookkeeping) are ignored. Unknown keys are errors. Validates the scenario.
SimulationSetup setup_from_ini(const IniDocument& doc);

/// Serializes the resolved scenario back to the same sections (shortest
/// round-trip numbers), so a manifest can be fed back in as a config.
std::string setup_to_ini(const SimulationSetup& setup);

/// Shortest decimal that parses back to the same double; "nan"/"inf" otherwise.
std::string format_number(double v);
double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

}  // namespace errdist
