#include "tampa/engine.hpp"

#include "tampa/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

namespace tampa {

namespace {

constexpr std::uint64_t kRandomPolicyTag = 0x72616e64706f6cULL;

// Oracle over the generated field, resolved through the lineage so split
// edges report their ratio-scaled share of the root edge's travel time.
class LineageOracle : public Predictor {
 public:
  LineageOracle(const TravelTimeField* field, const EdgeLineage* lineage)
      : field_(field), lineage_(lineage) {}

  double predict(const Edge& e, int minute) const override {
    const EdgeSpan& span = lineage_->at(e);
    return span.fraction() * field_->at(span.root, minute);
  }

 private:
  const TravelTimeField* field_;
  const EdgeLineage* lineage_;
};

struct Leg {
  Edge edge;
  int enter = 0;
  int exit = 0;
};

struct Epoch {
  int start = 0;
  NodeId node = 0;
  NodeId action = 0;
  TrajectoryRecord::Kind kind = TrajectoryRecord::Kind::kInspect;
  double utility = 0.0;
  double plan_value = 0.0;
  std::vector<Leg> legs;
  std::size_t leg_index = 0;
  EdgeMap<int> credit_draws;  // complaint counts at the epoch's start minute
};

class Simulator {
 public:
  Simulator(const Scenario& scenario, const EngineConfig& config, Strategy strategy,
            std::uint64_t seed)
      : scenario_(scenario), config_(config), strategy_(strategy), seed_(seed) {
    scenario.validate();
    graph_ = scenario.graph;
    lineage_ = identity_lineage(graph_);
    zeta_ = config.planner.zeta.value_or(graph_.median_edge_length());
    field_ = generate_travel_times(graph_, scenario.mtt, scenario.traffic, scenario.horizon,
                                   seed);
    persistence_ = std::make_unique<PersistencePredictor>(scenario.mtt);
    oracle_ = std::make_unique<LineageOracle>(&field_, &lineage_);

    std::map<double, ComplaintPmf> prior_cache;
    for (const Edge& e : graph_.edges()) {
      double weight = scenario.complaints.weights.at(e);
      auto it = prior_cache.find(weight);
      if (it == prior_cache.end()) {
        it = prior_cache.emplace(weight, scenario.prior_for(e)).first;
      }
      estimators_.emplace(e, EmpiricalEstimator(it->second, config.estimator.prior_weight));
      frozen_pmfs_.emplace(e, it->second);
      blocks_.emplace(e, BlockEmpirical(scenario.complaints.cap));
    }
    snapshot_ = reset_prior(estimators_, 0);
  }

  RunResult run();

 private:
  double realized_mu(const Edge& e, int minute) const {
    const EdgeSpan& span = lineage_.at(e);
    return span.fraction() * field_.at(span.root, minute);
  }

  double edge_mtt(const Edge& e) const {
    const EdgeSpan& span = lineage_.at(e);
    return span.fraction() * field_.mtt(span.root);
  }

  const Predictor& predictor() const {
    if (config_.predictor == PredictorKind::kPersistence) return *persistence_;
    return *oracle_;
  }

  void observe_minute(int t);
  bool detector_check(int t);
  void handle_trigger(int t);
  void process_arrivals(int t);
  void start_epoch(int t);
  NodeId choose_action(int t, double* plan_value);
  void close_epoch(bool trigger_cut);
  void reanchor_estimators();
  void transfer_state_across_split(const PatrolGraph::EdgeSplit& split);
  void attribute_minute(int t);
  void finish(RunResult& result);

  const Scenario& scenario_;
  const EngineConfig& config_;
  Strategy strategy_;
  std::uint64_t seed_;

  PatrolGraph graph_;
  EdgeLineage lineage_;
  double zeta_ = 1.0;
  TravelTimeField field_;
  std::unique_ptr<PersistencePredictor> persistence_;
  std::unique_ptr<LineageOracle> oracle_;

  EdgeMap<EmpiricalEstimator> estimators_;
  EdgeMap<ComplaintPmf> frozen_pmfs_;
  EdgeMap<BlockEmpirical> blocks_;
  PriorSnapshot snapshot_;

  EdgeMap<int> minute_complaints_;
  NodeId location_ = 0;
  std::optional<Epoch> epoch_;
  int next_decision_ = 0;
  double cumulative_ = 0.0;

  Trajectory trajectory_;
  RunMetrics metrics_;
  std::vector<NodeId> minute_node_;
};

void Simulator::observe_minute(int t) {
  minute_complaints_.clear();
  const EdgeMap<double>& weights = weights_at(scenario_.complaints, t);
  for (const auto& [e, span] : lineage_) {
    int total = draw_complaint(seed_, span.root, t, weights.at(span.root), scenario_.complaints);
    int count = complaints_in_span(seed_, span.root, t, total, span.lo, span.hi);
    minute_complaints_[e] = count;
    if (strategy_ == Strategy::kTampa) {
      estimators_.at(e).observe(count);
      blocks_.at(e).add(count);
    }
  }
  if (config_.predictor == PredictorKind::kPersistence) {
    for (const auto& [e, span] : lineage_) persistence_->observe(e, realized_mu(e, t));
  }
}

bool Simulator::detector_check(int t) {
  if (strategy_ != Strategy::kTampa) return false;
  long samples = t - snapshot_.snapshot_time;
  if (samples < 1) return false;

  EdgeMap<ComplaintPmf> current;
  for (const auto& [e, _] : lineage_) {
    current.emplace(e, config_.detector.compare_block ? blocks_.at(e).pmf()
                                                      : estimators_.at(e).pmf());
  }
  DivergenceDecision decision = network_divergence(snapshot_, current, config_.detector, samples);

  DetectorLogEntry entry;
  entry.t = t;
  entry.q = decision.q;
  entry.fired_edges = decision.fired_edges;
  entry.total_edges = decision.total_edges;
  entry.fired = decision.fired;
  for (const auto& [e, d] : decision.distances) entry.max_distance = std::max(entry.max_distance, d);
  if (decision.fired) entry.distances = decision.distances;
  metrics_.detector_log.push_back(std::move(entry));

  return decision.fired;
}

void Simulator::reanchor_estimators() {
  for (auto& [e, est] : estimators_) {
    const BlockEmpirical& block = blocks_.at(e);
    ComplaintPmf fresh = block.count() > 0 ? block.pmf() : est.pmf();
    est = EmpiricalEstimator(std::move(fresh), config_.estimator.prior_weight);
  }
}

void Simulator::transfer_state_across_split(const PatrolGraph::EdgeSplit& split) {
  apply_split_to_lineage(lineage_, split);
  Edge fwd{split.from, split.to};
  Edge rev{split.to, split.from};
  auto move_pmfs = [&](const Edge& parent, const Edge& child, double share) {
    const EmpiricalEstimator& src = estimators_.at(parent);
    // The parent's absorbed samples become pseudo-samples of the thinned
    // prior, so the half-edge keeps the parent's stiffness.
    int carried_weight =
        src.prior_weight() + static_cast<int>(std::min<long>(src.samples_seen(), 1 << 28));
    estimators_.emplace(child, EmpiricalEstimator(thin(src.pmf(), share), carried_weight));
  };
  move_pmfs(fwd, {split.from, split.mid}, split.gamma);
  move_pmfs(fwd, {split.mid, split.to}, 1.0 - split.gamma);
  move_pmfs(rev, {split.to, split.mid}, 1.0 - split.gamma);
  move_pmfs(rev, {split.mid, split.from}, split.gamma);
  estimators_.erase(fwd);
  estimators_.erase(rev);
  if (config_.predictor == PredictorKind::kPersistence) persistence_->apply_split(split);
}

void Simulator::handle_trigger(int t) {
  ++metrics_.triggers;
  metrics_.trigger_times.push_back(t);

  bool mid_edge = epoch_ && epoch_->kind == TrajectoryRecord::Kind::kCommute &&
                  epoch_->leg_index < epoch_->legs.size() &&
                  epoch_->legs[epoch_->leg_index].enter < t;

  if (mid_edge) {
    const Leg& leg = epoch_->legs[epoch_->leg_index];
    double gamma = static_cast<double>(t - leg.enter) / static_cast<double>(leg.exit - leg.enter);
    // Partial traversal: time cost for the minutes actually spent, the
    // gamma share of the edge's epoch-start complaint credit.
    epoch_->utility += -config_.planner.lambda * static_cast<double>(t - leg.enter) +
                       (1.0 - config_.planner.lambda) * gamma *
                           static_cast<double>(epoch_->credit_draws.at(leg.edge));

    if (config_.estimator.reanchor_on_shift) reanchor_estimators();

    EdgeTimes times;
    for (const auto& [e, _] : lineage_) times[e] = realized_mu(e, t);
    CommuteAdaptation adaptation = adapt_graph_on_commute(
        graph_, times, leg.edge.from, leg.edge.to, t, leg.enter, leg.exit,
        config_.planner.tau);
    graph_ = adaptation.graph;
    for (const PatrolGraph::EdgeSplit& split : adaptation.splits) {
      transfer_state_across_split(split);
    }
    metrics_.nodes_added += static_cast<int>(adaptation.splits.size());
    location_ = adaptation.patroller_node;
    close_epoch(/*trigger_cut=*/true);
  } else {
    if (config_.estimator.reanchor_on_shift) reanchor_estimators();
    if (epoch_) close_epoch(/*trigger_cut=*/true);
  }

  blocks_.clear();
  for (const Edge& e : graph_.edges()) blocks_.emplace(e, BlockEmpirical(scenario_.complaints.cap));
  snapshot_ = reset_prior(estimators_, t);
  next_decision_ = t + 1;
}

void Simulator::process_arrivals(int t) {
  if (!epoch_ || epoch_->kind != TrajectoryRecord::Kind::kCommute) return;
  while (epoch_->leg_index < epoch_->legs.size()) {
    const Leg& leg = epoch_->legs[epoch_->leg_index];
    if (leg.exit != t) break;
    epoch_->utility += realized_step_utility(graph_, leg.edge.from, leg.edge.to,
                                             epoch_->credit_draws,
                                             static_cast<double>(leg.exit - leg.enter),
                                             config_.planner.lambda, zeta_);
    location_ = leg.edge.to;
    ++epoch_->leg_index;
  }
  if (epoch_->leg_index == epoch_->legs.size()) {
    close_epoch(/*trigger_cut=*/false);
    next_decision_ = t;
  }
}

NodeId Simulator::choose_action(int t, double* plan_value) {
  int slots_left = (scenario_.horizon - t) / config_.planner.tau;
  int num_slots = std::clamp(slots_left, 1, config_.planner.num_slots);

  std::vector<EdgeTimes> slot_times(num_slots);
  for (int k = 0; k < num_slots; ++k) {
    int minute = std::min(t + k * config_.planner.tau, scenario_.horizon);
    for (const auto& [e, _] : lineage_) {
      slot_times[k][e] = std::max(predictor().predict(e, minute), edge_mtt(e));
    }
  }

  EdgeMap<ComplaintPmf> pmfs;
  if (strategy_ == Strategy::kStationary) {
    pmfs = frozen_pmfs_;
  } else {
    for (const auto& [e, est] : estimators_) pmfs.emplace(e, est.pmf());
  }

  WindowMdp mdp(graph_, location_, std::move(slot_times), std::move(pmfs),
                config_.planner.lambda, zeta_, config_.planner.tau);

  if (strategy_ == Strategy::kRandom) {
    const std::vector<NodeId>& actions = mdp.action_set(location_, 0);
    Rng rng(KeyMixer(seed_).add(kRandomPolicyTag).add(t).key());
    *plan_value = 0.0;
    return actions[rng.uniform_below(static_cast<int>(actions.size()))];
  }

  Plan plan = mdp.solve();
  *plan_value = plan.value;
  return plan.first_action;
}

void Simulator::start_epoch(int t) {
  if (strategy_ == Strategy::kTampa) {
    // A fresh window: the shift reference becomes the current estimate.
    snapshot_ = reset_prior(estimators_, t);
    for (auto& [e, block] : blocks_) block.reset();
  }

  double plan_value = 0.0;
  NodeId action = choose_action(t, &plan_value);

  Epoch epoch;
  epoch.start = t;
  epoch.node = location_;
  epoch.action = action;
  epoch.plan_value = plan_value;

  if (action == location_) {
    epoch.kind = TrajectoryRecord::Kind::kInspect;
    epoch.utility = realized_step_utility(graph_, location_, location_, minute_complaints_, 0.0,
                                          config_.planner.lambda, zeta_);
    epoch_ = std::move(epoch);
    next_decision_ = t + config_.planner.tau;
    return;
  }

  epoch.kind = TrajectoryRecord::Kind::kCommute;
  EdgeTimes realized;
  for (const auto& [e, _] : lineage_) realized[e] = realized_mu(e, t);
  auto path = shortest_path(graph_, realized, location_, action);
  if (!path) throw std::runtime_error("chosen action is unreachable in the realized graph");

  int clock = t;
  for (const Edge& e : path->edges) {
    if (clock > scenario_.horizon) break;  // would never be walked
    int duration = static_cast<int>(std::max(1L, std::lround(realized_mu(e, clock))));
    epoch.legs.push_back({e, clock, clock + duration});
    epoch.credit_draws[e] = minute_complaints_.at(e);
    clock += duration;
  }

  epoch_ = std::move(epoch);
  next_decision_ = clock;  // re-plan on arrival
}

void Simulator::close_epoch(bool trigger_cut) {
  TrajectoryRecord record;
  record.t = epoch_->start;
  record.node = epoch_->node;
  record.kind = epoch_->kind;
  record.action = epoch_->action;
  record.utility = epoch_->utility;
  record.plan_value = epoch_->plan_value;
  record.trigger_cut = trigger_cut;
  cumulative_ += record.utility;
  record.cumulative = cumulative_;
  trajectory_.push_back(record);
  epoch_.reset();
}

void Simulator::attribute_minute(int t) {
  NodeId node = location_;
  if (epoch_ && epoch_->kind == TrajectoryRecord::Kind::kCommute &&
      epoch_->leg_index < epoch_->legs.size()) {
    const Leg& leg = epoch_->legs[epoch_->leg_index];
    if (leg.enter <= t && t < leg.exit) {
      double frac = (static_cast<double>(t - leg.enter) + 0.5) /
                    static_cast<double>(leg.exit - leg.enter);
      node = frac <= 0.5 ? leg.edge.from : leg.edge.to;
    }
  }
  minute_node_[t] = node;
}

void Simulator::finish(RunResult& result) {
  // Legs completing exactly at the horizon still count; anything beyond is
  // dropped unpaid.
  if (epoch_ && epoch_->kind == TrajectoryRecord::Kind::kCommute) {
    while (epoch_->leg_index < epoch_->legs.size() &&
           epoch_->legs[epoch_->leg_index].exit <= scenario_.horizon) {
      const Leg& leg = epoch_->legs[epoch_->leg_index];
      epoch_->utility += realized_step_utility(graph_, leg.edge.from, leg.edge.to,
                                               epoch_->credit_draws,
                                               static_cast<double>(leg.exit - leg.enter),
                                               config_.planner.lambda, zeta_);
      location_ = leg.edge.to;
      ++epoch_->leg_index;
    }
  }
  if (epoch_) close_epoch(false);

  TrajectoryRecord terminal;
  terminal.t = scenario_.horizon;
  terminal.node = location_;
  terminal.kind = TrajectoryRecord::Kind::kTerminal;
  terminal.action = location_;
  terminal.cumulative = cumulative_;
  trajectory_.push_back(terminal);

  metrics_.total_utility = cumulative_;

  std::vector<int> boundaries{0};
  for (const ShiftEvent& shift : scenario_.complaints.shifts) boundaries.push_back(shift.t);
  boundaries.push_back(scenario_.horizon);
  for (size_t i = 0; i + 1 < boundaries.size(); ++i) {
    PeriodVisitStats stats;
    stats.begin = boundaries[i];
    stats.end = boundaries[i + 1];
    int span = stats.end - stats.begin;
    for (int m = stats.begin; m < stats.end; ++m) stats.fraction[minute_node_[m]] += 1.0;
    for (auto& [_, f] : stats.fraction) f /= static_cast<double>(span);
    metrics_.visit_fractions.push_back(std::move(stats));
  }

  result.strategy = strategy_;
  result.seed = seed_;
  result.trajectory = std::move(trajectory_);
  result.metrics = std::move(metrics_);
  result.final_graph = graph_;
  result.final_estimators = std::move(estimators_);
}

RunResult Simulator::run() {
  location_ = scenario_.start_node;
  next_decision_ = 0;
  minute_node_.assign(scenario_.horizon, scenario_.start_node);

  for (int t = 0; t < scenario_.horizon; ++t) {
    process_arrivals(t);
    if (epoch_ && epoch_->kind == TrajectoryRecord::Kind::kInspect && t == next_decision_) {
      close_epoch(/*trigger_cut=*/false);
    }
    observe_minute(t);
    if (detector_check(t)) handle_trigger(t);
    if (!epoch_ && t == next_decision_) start_epoch(t);
    attribute_minute(t);
  }

  RunResult result;
  finish(result);
  return result;
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kTampa: return "tampa";
    case Strategy::kStationary: return "stationary";
    case Strategy::kRandom: return "random";
  }
  return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "tampa") return Strategy::kTampa;
  if (name == "stationary") return Strategy::kStationary;
  if (name == "random") return Strategy::kRandom;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

double global_cost(const Trajectory& trajectory) {
  if (trajectory.empty()) throw std::invalid_argument("empty trajectory");
  double acc = 0.0;
  for (size_t i = 0; i + 1 < trajectory.size(); ++i) acc += trajectory[i].utility;
  return acc;
}

double realized_step_utility(const PatrolGraph& graph, NodeId from, NodeId to,
                             const EdgeMap<int>& complaints, double mu, double lambda,
                             double zeta) {
  if (from == to) {
    double acc = 0.0;
    for (NodeId u : graph.out_neighbors(from)) {
      double cover = std::min(1.0, zeta / graph.length(from, u));
      acc += static_cast<double>(complaints.at({from, u})) * cover;
    }
    return (1.0 - lambda) * acc;
  }
  if (!graph.has_edge(from, to)) {
    throw std::invalid_argument("realized step is not a single edge");
  }
  return -lambda * mu + (1.0 - lambda) * static_cast<double>(complaints.at({from, to}));
}

RunResult run_strategy(const Scenario& scenario, const EngineConfig& config, Strategy strategy,
                       std::uint64_t seed) {
  Simulator sim(scenario, config, strategy, seed);
  return sim.run();
}

RunResult run_tampa(const Scenario& scenario, const EngineConfig& config, std::uint64_t seed) {
  return run_strategy(scenario, config, Strategy::kTampa, seed);
}

RunResult run_stationary(const Scenario& scenario, const EngineConfig& config,
                         std::uint64_t seed) {
  return run_strategy(scenario, config, Strategy::kStationary, seed);
}

RunResult run_random(const Scenario& scenario, const EngineConfig& config, std::uint64_t seed) {
  return run_strategy(scenario, config, Strategy::kRandom, seed);
}

double proximity_fraction(const PeriodVisitStats& stats, const PatrolGraph& graph, NodeId node) {
  double acc = 0.0;
  auto take = [&](NodeId v) {
    auto it = stats.fraction.find(v);
    if (it != stats.fraction.end()) acc += it->second;
  };
  take(node);
  for (NodeId u : graph.out_neighbors(node)) take(u);
  return acc;
}

std::vector<double> cumulative_series(const Trajectory& trajectory, int horizon) {
  std::vector<double> series(horizon + 1, 0.0);
  double value = 0.0;
  size_t idx = 0;
  for (int m = 0; m <= horizon; ++m) {
    while (idx < trajectory.size() && trajectory[idx].t <= m) {
      value = trajectory[idx].cumulative;
      ++idx;
    }
    series[m] = value;
  }
  return series;
}

ComparisonReport compare_strategies(const Scenario& scenario, const EngineConfig& config,
                                    const std::vector<Strategy>& strategies,
                                    const std::vector<std::uint64_t>& seeds, int threads) {
  if (strategies.empty() || seeds.empty()) {
    throw std::invalid_argument("comparison needs at least one strategy and one seed");
  }

  struct Cell {
    RunResult result;
  };
  std::vector<Cell> cells(strategies.size() * seeds.size());

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      Strategy strategy = strategies[i / seeds.size()];
      std::uint64_t seed = seeds[i % seeds.size()];
      cells[i].result = run_strategy(scenario, config, strategy, seed);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  ComparisonReport report;
  report.seeds = seeds;

  for (size_t si = 0; si < strategies.size(); ++si) {
    StrategySummary summary;
    summary.strategy = strategies[si];
    std::vector<const RunResult*> runs;
    for (size_t j = 0; j < seeds.size(); ++j) runs.push_back(&cells[si * seeds.size() + j].result);

    for (const RunResult* run : runs) {
      summary.utility_per_seed.push_back(run->metrics.total_utility);
      summary.cumulative_per_seed.push_back(cumulative_series(run->trajectory, scenario.horizon));
    }
    summary.mean_utility = mean(summary.utility_per_seed);
    summary.stddev_utility =
        seeds.size() >= 2 ? sample_stddev(summary.utility_per_seed) : 0.0;

    summary.mean_cumulative.assign(scenario.horizon + 1, 0.0);
    for (const auto& series : summary.cumulative_per_seed) {
      for (int m = 0; m <= scenario.horizon; ++m) summary.mean_cumulative[m] += series[m];
    }
    for (double& v : summary.mean_cumulative) v /= static_cast<double>(seeds.size());

    size_t periods = runs.front()->metrics.visit_fractions.size();
    for (size_t p = 0; p < periods; ++p) {
      PeriodVisitStats avg;
      avg.begin = runs.front()->metrics.visit_fractions[p].begin;
      avg.end = runs.front()->metrics.visit_fractions[p].end;
      for (const RunResult* run : runs) {
        for (const auto& [node, f] : run->metrics.visit_fractions[p].fraction) {
          avg.fraction[node] += f / static_cast<double>(seeds.size());
        }
      }
      summary.visit_fractions.push_back(std::move(avg));
    }
    report.strategies.push_back(std::move(summary));
  }

  for (size_t a = 0; a < strategies.size(); ++a) {
    for (size_t b = 0; b < strategies.size(); ++b) {
      if (a == b) continue;
      PairwiseComparison cmp;
      cmp.a = strategies[a];
      cmp.b = strategies[b];
      cmp.mean_a = report.strategies[a].mean_utility;
      cmp.mean_b = report.strategies[b].mean_utility;
      double denom = std::abs(cmp.mean_b);
      cmp.improvement_pct = denom == 0.0 ? 0.0 : 100.0 * (cmp.mean_a - cmp.mean_b) / denom;
      if (seeds.size() >= 2) {
        cmp.p_value = paired_t_test(report.strategies[a].utility_per_seed,
                                    report.strategies[b].utility_per_seed)
                          .p_value;
      }
      report.pairwise.push_back(cmp);
    }
  }
  return report;
}

}  // namespace tampa
