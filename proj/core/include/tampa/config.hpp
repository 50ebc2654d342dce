#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tampa/engine.hpp"

namespace tampa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolved experiment description. Precedence is command-line flags over the
// config file over built-in defaults; the fully resolved form is embedded in
// every output file.
struct ExperimentConfig {
  std::string scenario_path;
  std::vector<Strategy> strategies{Strategy::kTampa, Strategy::kStationary, Strategy::kRandom};
  std::vector<std::uint64_t> seeds{1};
  EngineConfig engine;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws ConfigError
};

ExperimentConfig experiment_config_from_json_string(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Canonical JSON of the resolved configuration (sorted keys, stable across
// re-runs with the same inputs).
std::string resolved_config_json(const ExperimentConfig& config);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace tampa
