#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tampa/detector.hpp"
#include "tampa/planner.hpp"
#include "tampa/scenario.hpp"
#include "tampa/traffic.hpp"

namespace tampa {

enum class Strategy { kTampa, kStationary, kRandom };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct PlannerConfig {
  double lambda = 0.5;
  // Inspection radius; defaults to the scenario graph's median edge length.
  std::optional<double> zeta;
  int tau = 8;
  int num_slots = 6;
};

struct EstimatorConfig {
  int prior_weight = 50;
  // On a detected shift, restart each edge estimator from the empirical
  // distribution observed since the last reset, so plans track the new
  // regime instead of the long-run blend.
  bool reanchor_on_shift = true;
};

enum class PredictorKind { kOracle, kPersistence };

struct EngineConfig {
  PlannerConfig planner;
  EstimatorConfig estimator;
  ShiftConfig detector;
  PredictorKind predictor = PredictorKind::kOracle;
};

struct TrajectoryRecord {
  enum class Kind { kInspect, kCommute, kTerminal };

  int t = 0;  // minute the epoch begins (patroller at a node)
  NodeId node = 0;
  Kind kind = Kind::kTerminal;
  NodeId action = 0;  // destination; equals node when inspecting
  double utility = 0.0;
  double cumulative = 0.0;  // running total including this epoch
  bool trigger_cut = false;  // epoch ended early by a detected shift
  double plan_value = 0.0;   // window objective behind this action (planned strategies)
};

using Trajectory = std::vector<TrajectoryRecord>;

// Sum of realized utilities over the trajectory's transitions; the final
// record carries no transition.
double global_cost(const Trajectory& trajectory);

// Utility of a single realized step. `from == to` is an inspection: each
// outgoing edge's complaint count weighted by min(1, zeta / length). A move
// must be one edge: -lambda * mu + (1 - lambda) * complaints. Throws for a
// non-adjacent move.
double realized_step_utility(const PatrolGraph& graph, NodeId from, NodeId to,
                             const EdgeMap<int>& complaints, double mu, double lambda,
                             double zeta);

struct DetectorLogEntry {
  int t = 0;
  double q = 1.0;
  double max_distance = 0.0;
  long fired_edges = 0;
  long total_edges = 0;
  bool fired = false;
  EdgeMap<double> distances;  // populated for fired minutes
};

struct PeriodVisitStats {
  int begin = 0;
  int end = 0;                         // exclusive
  std::map<NodeId, double> fraction;   // share of the period spent near each node
};

struct RunMetrics {
  double total_utility = 0.0;
  int triggers = 0;
  int nodes_added = 0;
  std::vector<int> trigger_times;
  // One entry per segment between scheduled shift events.
  std::vector<PeriodVisitStats> visit_fractions;
  std::vector<DetectorLogEntry> detector_log;
};

struct RunResult {
  Strategy strategy = Strategy::kTampa;
  std::uint64_t seed = 0;
  Trajectory trajectory;
  RunMetrics metrics;
  PatrolGraph final_graph;
  EdgeMap<EmpiricalEstimator> final_estimators;
};

RunResult run_strategy(const Scenario& scenario, const EngineConfig& config, Strategy strategy,
                       std::uint64_t seed);

RunResult run_tampa(const Scenario& scenario, const EngineConfig& config, std::uint64_t seed);
RunResult run_stationary(const Scenario& scenario, const EngineConfig& config,
                         std::uint64_t seed);
RunResult run_random(const Scenario& scenario, const EngineConfig& config, std::uint64_t seed);

// Fraction of a period spent at `node` or any of its current neighbors.
double proximity_fraction(const PeriodVisitStats& stats, const PatrolGraph& graph, NodeId node);

struct PairwiseComparison {
  Strategy a = Strategy::kTampa;
  Strategy b = Strategy::kStationary;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double improvement_pct = 0.0;  // 100 * (mean_a - mean_b) / |mean_b|
  double p_value = 1.0;          // paired two-sided
};

struct StrategySummary {
  Strategy strategy = Strategy::kTampa;
  std::vector<double> utility_per_seed;
  double mean_utility = 0.0;
  double stddev_utility = 0.0;
  // Averaged over seeds, per period.
  std::vector<PeriodVisitStats> visit_fractions;
  // Mean cumulative utility per minute 0..horizon.
  std::vector<double> mean_cumulative;
  std::vector<std::vector<double>> cumulative_per_seed;
};

struct ComparisonReport {
  std::vector<std::uint64_t> seeds;
  std::vector<StrategySummary> strategies;
  std::vector<PairwiseComparison> pairwise;
};

// Runs every strategy over every seed (fanned out over `threads` workers)
// and aggregates utilities, significance tests, visit shares, and
// cumulative-utility series.
ComparisonReport compare_strategies(const Scenario& scenario, const EngineConfig& config,
                                    const std::vector<Strategy>& strategies,
                                    const std::vector<std::uint64_t>& seeds, int threads = 0);

// Step function of cumulative utility sampled each minute 0..horizon.
std::vector<double> cumulative_series(const Trajectory& trajectory, int horizon);

}  // namespace tampa
