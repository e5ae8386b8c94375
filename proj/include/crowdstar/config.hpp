#pragma once

#include <filesystem>
#include <iosfwd>

#include "crowdstar/simulator.hpp"

namespace crowdstar {

// Strict declarative config: [section.sub] headers, key = value lines,
// '#' comments. Unknown keys and sections are rejected after loading
// (parse-validate-fail-fast), duplicates are parse errors.
class IniFile {
 public:
  static IniFile parse(std::istream& in, const std::string& origin = "<stream>");
  static IniFile load(const std::filesystem::path& path);

  // Removes and returns the value; consumed keys pass ensure_consumed().
  std::optional<std::string> take(const std::string& section, const std::string& key);
  bool has_section(const std::string& section) const;
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;
  void drop_section(const std::string& section);

  // Throws Error naming every unconsumed key.
  void ensure_consumed() const;

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

bool parse_bool(const std::string& value, const std::string& context);
std::int64_t parse_int(const std::string& value, const std::string& context);
double parse_double(const std::string& value, const std::string& context);
// "forever" | "<n>d" | "<n>h" | "<n>m" | "<n>s" | plain seconds
std::optional<Duration> parse_window(const std::string& value, const std::string& context);
std::vector<std::string> parse_list(const std::string& value);

struct AppConfig {
  std::vector<Topic> topic_universe;
  std::map<CrowdId, CrowdPolicy> policies;
  IndexConfig index;
  PruneThresholds prune = PruneThresholds::at_percentile(10.0);
  ScoreWeights weights;
  int representative_count = 50;
  double activity_gate_hours = 24.0;
  int max_levels = 3;
  AxisMode axes = AxisMode::four;
  int default_budget = 4;
  std::filesystem::path state_dir = "crowdstar-state";
  sim::SimConfig simulator;

  RouterConfig router_config() const;
};

// Two built-in crowds (twitter-like, quora-like) and the default simulator
// mix; the config file overrides any part of it.
AppConfig default_config();
AppConfig load_config(const std::filesystem::path& path);
AppConfig parse_config(std::istream& in, const std::string& origin = "<stream>");

}  // namespace crowdstar
