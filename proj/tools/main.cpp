// Command-line front end: validate scenarios, run single simulations, compare
// strategies across seeds, and sweep one parameter over a grid.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tampa/config.hpp"
#include "tampa/report.hpp"
#include "tampa/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tampa;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string scenario;
  std::string config;
  std::string seeds;
  std::string strategy;
  std::string out;
  std::string format;
  std::optional<double> lambda;
  std::optional<int> tau;
  std::optional<int> num_slots;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--scenario", flags.scenario, "Scenario JSON file");
  cmd->add_option("--config", flags.config, "Experiment config JSON file");
  cmd->add_option("--seeds", flags.seeds, "Comma list or a..b range, e.g. 1,2,5 or 1..20");
  cmd->add_option("--strategy", flags.strategy, "Strategy: tampa, stationary or random");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--format", flags.format, "Comma list of output formats (csv,json)");
  cmd->add_option("--lambda", flags.lambda, "Reward weight in [0,1]");
  cmd->add_option("--tau", flags.tau, "Slot length in minutes");
  cmd->add_option("--num-slots", flags.num_slots, "Slots per planning window");
}

// flags > config file > defaults
ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig config;
  if (!flags.config.empty()) config = load_experiment_config(flags.config);
  if (!flags.scenario.empty()) config.scenario_path = flags.scenario;
  if (!flags.seeds.empty()) config.seeds = parse_seed_list(flags.seeds);
  if (!flags.strategy.empty()) config.strategies = {strategy_from_name(flags.strategy)};
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (!flags.format.empty()) {
    config.formats.clear();
    std::stringstream ss(flags.format);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) config.formats.push_back(item);
    }
  }
  if (flags.lambda) config.engine.planner.lambda = *flags.lambda;
  if (flags.tau) config.engine.planner.tau = *flags.tau;
  if (flags.num_slots) config.engine.planner.num_slots = *flags.num_slots;
  config.validate();
  return config;
}

bool wants(const ExperimentConfig& config, const std::string& format) {
  for (const std::string& f : config.formats) {
    if (f == format) return true;
  }
  return false;
}

int cmd_validate(const CommonFlags& flags) {
  if (flags.scenario.empty()) {
    std::cerr << "validate: --scenario is required\n";
    return kExitValidation;
  }
  Scenario scenario = load_scenario(flags.scenario);
  std::cout << "scenario '" << scenario.name << "' is valid: " << scenario.graph.num_nodes()
            << " nodes, " << scenario.graph.num_edge_pairs() << " edge pairs, horizon "
            << scenario.horizon << ", start node " << scenario.start_node << "\n";
  return 0;
}

int cmd_simulate(const CommonFlags& flags) {
  ExperimentConfig config = resolve_config(flags);
  Scenario scenario = load_scenario(config.scenario_path);
  std::string resolved = resolved_config_json(config);

  for (Strategy strategy : config.strategies) {
    for (std::uint64_t seed : config.seeds) {
      RunResult result = run_strategy(scenario, config.engine, strategy, seed);
      std::string stem = strategy_name(strategy) + "_seed" + std::to_string(seed);
      if (wants(config, "csv")) {
        write_text_atomic(fs::path(config.out_dir) / ("trajectory_" + stem + ".csv"),
                          trajectory_csv(result, resolved));
      }
      if (wants(config, "json")) {
        write_text_atomic(fs::path(config.out_dir) / ("metrics_" + stem + ".json"),
                          metrics_json(result, resolved));
      }
      std::cout << strategy_name(strategy) << " seed " << seed
                << ": Q = " << result.metrics.total_utility
                << ", triggers = " << result.metrics.triggers << "\n";
    }
  }
  return 0;
}

void write_comparison(const ExperimentConfig& config, const Scenario& scenario,
                      const fs::path& out_dir, const std::string& resolved) {
  ComparisonReport report =
      compare_strategies(scenario, config.engine, config.strategies, config.seeds,
                         config.threads);
  if (wants(config, "json")) {
    write_text_atomic(out_dir / "comparison.json", comparison_json(report, resolved));
  }
  if (wants(config, "csv")) {
    for (const StrategySummary& summary : report.strategies) {
      write_text_atomic(out_dir / ("series_" + strategy_name(summary.strategy) + ".csv"),
                        series_csv(summary, report.seeds, resolved));
    }
  }
  for (const PairwiseComparison& p : report.pairwise) {
    std::cout << strategy_name(p.a) << " vs " << strategy_name(p.b) << ": "
              << p.improvement_pct << "% (p = " << p.p_value << ")\n";
  }
}

int cmd_compare(const CommonFlags& flags) {
  ExperimentConfig config = resolve_config(flags);
  Scenario scenario = load_scenario(config.scenario_path);
  write_comparison(config, scenario, fs::path(config.out_dir), resolved_config_json(config));
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& param, const std::string& values) {
  ExperimentConfig base = resolve_config(flags);
  Scenario scenario = load_scenario(base.scenario_path);

  std::vector<std::string> cells;
  std::stringstream ss(values);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) cells.push_back(item);
  }
  if (cells.empty()) throw ConfigError("sweep: empty --values list");

  for (const std::string& cell : cells) {
    ExperimentConfig config = base;
    if (param == "lambda") {
      config.engine.planner.lambda = std::stod(cell);
    } else if (param == "tau") {
      config.engine.planner.tau = std::stoi(cell);
    } else if (param == "num_slots") {
      config.engine.planner.num_slots = std::stoi(cell);
    } else if (param == "q") {
      if (cell == "dkw") {
        config.engine.detector.fixed_q.reset();
      } else {
        config.engine.detector.fixed_q = std::stod(cell);
      }
    } else if (param == "aggregator") {
      if (cell == "all") {
        config.engine.detector.aggregator.mode = AggregatorConfig::Mode::kAll;
      } else if (cell == "any") {
        config.engine.detector.aggregator.mode = AggregatorConfig::Mode::kAny;
      } else {
        config.engine.detector.aggregator.mode = AggregatorConfig::Mode::kFraction;
        config.engine.detector.aggregator.fraction = std::stod(cell);
      }
    } else {
      throw ConfigError("sweep: unknown parameter '" + param + "'");
    }
    config.validate();
    fs::path out_dir = fs::path(config.out_dir) / (param + "=" + cell);
    std::cout << "--- " << param << " = " << cell << "\n";
    write_comparison(config, scenario, out_dir, resolved_config_json(config));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive moving-window patrol simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sweep_param;
  std::string sweep_values;

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common_flags(validate, flags);

  CLI::App* simulate = app.add_subcommand("simulate", "Run strategies and write per-run outputs");
  add_common_flags(simulate, flags);

  CLI::App* compare = app.add_subcommand("compare", "Run all strategies across seeds");
  add_common_flags(compare, flags);

  CLI::App* sweep = app.add_subcommand("sweep", "Compare strategies across a parameter grid");
  add_common_flags(sweep, flags);
  sweep->add_option("--param", sweep_param, "lambda, tau, num_slots, q or aggregator")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma list of grid values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(flags);
    if (simulate->parsed()) return cmd_simulate(flags);
    if (compare->parsed()) return cmd_compare(flags);
    if (sweep->parsed()) return cmd_sweep(flags, sweep_param, sweep_values);
  } catch (const ScenarioError& err) {
    std::cerr << "scenario error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
