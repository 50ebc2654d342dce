#include "tampa/report.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tampa {

namespace {

using nlohmann::json;

std::string kind_name(TrajectoryRecord::Kind kind) {
  switch (kind) {
    case TrajectoryRecord::Kind::kInspect: return "inspect";
    case TrajectoryRecord::Kind::kCommute: return "commute";
    case TrajectoryRecord::Kind::kTerminal: return "end";
  }
  return "unknown";
}

std::string edge_key(const Edge& e) {
  return std::to_string(e.from) + "-" + std::to_string(e.to);
}

// Shortest representation that parses back to the same double.
std::string num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

json visit_stats_json(const std::vector<PeriodVisitStats>& periods) {
  json out = json::array();
  for (const PeriodVisitStats& p : periods) {
    json fractions = json::object();
    for (const auto& [node, f] : p.fraction) fractions[std::to_string(node)] = f;
    out.push_back({{"begin", p.begin}, {"end", p.end}, {"fraction", fractions}});
  }
  return out;
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const RunResult& result, const std::string& resolved_config) {
  std::ostringstream out;
  out << "# config: " << resolved_config << "\n";
  out << "# strategy: " << strategy_name(result.strategy) << "\n";
  out << "# seed: " << result.seed << "\n";
  out << "t,node,status,action,r_g,cumulative_Q,trigger_fired,J\n";
  for (const TrajectoryRecord& r : result.trajectory) {
    out << r.t << ',' << r.node << ',' << kind_name(r.kind) << ',' << r.action << ','
        << num(r.utility) << ',' << num(r.cumulative) << ',' << (r.trigger_cut ? 1 : 0) << ','
        << num(r.plan_value) << "\n";
  }
  return out.str();
}

std::string metrics_json(const RunResult& result, const std::string& resolved_config) {
  json j;
  j["config"] = json::parse(resolved_config);
  j["strategy"] = strategy_name(result.strategy);
  j["seed"] = result.seed;
  j["total_utility"] = result.metrics.total_utility;
  j["triggers"] = result.metrics.triggers;
  j["trigger_times"] = result.metrics.trigger_times;
  j["nodes_added"] = result.metrics.nodes_added;
  j["final_node_count"] = result.final_graph.num_nodes();
  j["visit_fractions"] = visit_stats_json(result.metrics.visit_fractions);

  json detector = json::array();
  for (const DetectorLogEntry& entry : result.metrics.detector_log) {
    json e = {{"t", entry.t},
              {"q", entry.q},
              {"max_distance", entry.max_distance},
              {"fired_edges", entry.fired_edges},
              {"total_edges", entry.total_edges},
              {"fired", entry.fired}};
    if (entry.fired) {
      json distances = json::object();
      for (const auto& [edge, d] : entry.distances) distances[edge_key(edge)] = d;
      e["distances"] = distances;
    }
    detector.push_back(std::move(e));
  }
  j["detector_log"] = detector;

  json estimators = json::object();
  for (const auto& [edge, est] : result.final_estimators) {
    estimators[edge_key(edge)] = {{"pmf", est.pmf().masses()},
                                  {"prior_weight", est.prior_weight()},
                                  {"samples_seen", est.samples_seen()}};
  }
  j["estimators"] = estimators;
  return j.dump(2);
}

std::string comparison_json(const ComparisonReport& report, const std::string& resolved_config) {
  json j;
  j["config"] = json::parse(resolved_config);
  j["seeds"] = report.seeds;

  json strategies = json::object();
  for (const StrategySummary& s : report.strategies) {
    json js;
    js["utility_per_seed"] = s.utility_per_seed;
    js["mean_utility"] = s.mean_utility;
    js["stddev_utility"] = s.stddev_utility;
    js["visit_fractions"] = visit_stats_json(s.visit_fractions);
    strategies[strategy_name(s.strategy)] = std::move(js);
  }
  j["strategies"] = strategies;

  json pairwise = json::array();
  for (const PairwiseComparison& p : report.pairwise) {
    pairwise.push_back({{"a", strategy_name(p.a)},
                        {"b", strategy_name(p.b)},
                        {"mean_a", p.mean_a},
                        {"mean_b", p.mean_b},
                        {"improvement_pct", p.improvement_pct},
                        {"p_value", p.p_value}});
  }
  j["pairwise"] = pairwise;
  return j.dump(2);
}

std::string series_csv(const StrategySummary& summary,
                       const std::vector<std::uint64_t>& seeds,
                       const std::string& resolved_config) {
  std::ostringstream out;
  out << "# config: " << resolved_config << "\n";
  out << "# strategy: " << strategy_name(summary.strategy) << "\n";
  out << "t";
  for (std::uint64_t seed : seeds) out << ",seed_" << seed;
  out << ",mean\n";
  for (size_t m = 0; m < summary.mean_cumulative.size(); ++m) {
    out << m;
    for (const auto& series : summary.cumulative_per_seed) out << ',' << num(series[m]);
    out << ',' << num(summary.mean_cumulative[m]) << "\n";
  }
  return out.str();
}

}  // namespace tampa
