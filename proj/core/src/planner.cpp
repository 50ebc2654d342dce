#include "tampa/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tampa {

WindowMdp::WindowMdp(PatrolGraph graph, NodeId start_node, std::vector<EdgeTimes> slot_times,
                     EdgeMap<ComplaintPmf> pmfs, double lambda, double zeta, int tau)
    : graph_(std::move(graph)),
      start_node_(start_node),
      slot_times_(std::move(slot_times)),
      pmfs_(std::move(pmfs)),
      lambda_(lambda),
      zeta_(zeta),
      tau_(tau) {
  if (!graph_.has_node(start_node_)) throw std::invalid_argument("start node not in graph");
  if (slot_times_.empty()) throw std::invalid_argument("window needs at least one slot");
  if (lambda_ < 0.0 || lambda_ > 1.0) throw std::invalid_argument("lambda outside [0,1]");
  if (!(zeta_ > 0.0)) throw std::invalid_argument("inspection threshold must be positive");
  for (const Edge& e : graph_.edges()) {
    if (!pmfs_.contains(e)) throw std::invalid_argument("missing complaint pmf for an edge");
  }

  tables_.resize(slot_times_.size());
  for (int k = 0; k < num_slots(); ++k) {
    for (NodeId s : graph_.node_ids()) {
      SourceTable entry;
      for (NodeId target : graph_.node_ids()) {
        auto result = shortest_path(graph_, slot_times_[k], s, target);
        if (!result) continue;
        entry.distance[target] = result->distance;
        entry.path[target] = std::move(result->edges);
        if (result->distance <= static_cast<double>(tau_)) entry.actions.push_back(target);
      }
      tables_[k].emplace(s, std::move(entry));
    }
  }
}

const WindowMdp::SourceTable& WindowMdp::table(NodeId s, int k) const {
  if (k < 0 || k >= num_slots()) throw std::invalid_argument("slot index out of range");
  auto it = tables_[k].find(s);
  if (it == tables_[k].end()) throw std::invalid_argument("unknown state node");
  return it->second;
}

const std::vector<NodeId>& WindowMdp::action_set(NodeId s, int k) const {
  return table(s, k).actions;
}

double WindowMdp::routing_cost(NodeId s, NodeId a, int k) const {
  if (s == a) return 0.0;
  const SourceTable& entry = table(s, k);
  auto it = entry.distance.find(a);
  if (it == entry.distance.end() || it->second > static_cast<double>(tau_)) {
    throw std::invalid_argument("action outside the feasible set");
  }
  return it->second;
}

double WindowMdp::complaint_cost(NodeId s, NodeId a, int k) const {
  // Complaints accrue per minute, so the expectation over the window's
  // first k+1 slots is (k+1) * tau * per-minute mean.
  double slots_elapsed = static_cast<double>(k + 1) * static_cast<double>(tau_);
  if (s == a) {
    double acc = 0.0;
    for (NodeId u : graph_.out_neighbors(s)) {
      double cover = std::min(1.0, zeta_ / graph_.length(s, u));
      acc += slots_elapsed * pmfs_.at({s, u}).mean() * cover;
    }
    return acc;
  }
  double acc = 0.0;
  for (const Edge& e : path_edges(s, a, k)) acc += slots_elapsed * pmfs_.at(e).mean();
  return acc;
}

double WindowMdp::reward(NodeId s, NodeId a, int k) const {
  return -lambda_ * routing_cost(s, a, k) + (1.0 - lambda_) * complaint_cost(s, a, k);
}

const std::vector<Edge>& WindowMdp::path_edges(NodeId s, NodeId a, int k) const {
  const SourceTable& entry = table(s, k);
  auto it = entry.path.find(a);
  if (it == entry.path.end() ||
      (s != a && entry.distance.at(a) > static_cast<double>(tau_))) {
    throw std::invalid_argument("action outside the feasible set");
  }
  return it->second;
}

Plan WindowMdp::solve() const {
  int slots = num_slots();
  std::vector<NodeId> nodes = graph_.node_ids();

  // value[s] holds the optimal tail value from state s at slot k+1.
  std::map<NodeId, double> value;
  for (NodeId s : nodes) value[s] = 0.0;
  std::vector<std::map<NodeId, NodeId>> best_action(slots);

  for (int k = slots - 1; k >= 0; --k) {
    std::map<NodeId, double> next_value;
    for (NodeId s : nodes) {
      double best = 0.0;
      NodeId arg = s;
      bool first = true;
      for (NodeId a : action_set(s, k)) {  // ascending id: first best wins ties
        double q = reward(s, a, k) + value.at(a);
        if (first || q > best) {
          best = q;
          arg = a;
          first = false;
        }
      }
      next_value[s] = best;
      best_action[k][s] = arg;
    }
    value = std::move(next_value);
  }

  Plan plan;
  plan.value = value.at(start_node_);
  NodeId state = start_node_;
  for (int k = 0; k < slots; ++k) {
    NodeId a = best_action[k].at(state);
    plan.actions.push_back(a);
    state = a;
  }
  plan.first_action = plan.actions.front();
  return plan;
}

int next_window_start(int start, NodeId node, NodeId action,
                      std::span<const double> realized_leg_times, int tau) {
  if (action == node) return start + tau;
  int elapsed = 0;
  for (double leg : realized_leg_times) {
    elapsed += std::max(1L, std::lround(leg));
  }
  return start + elapsed;
}

}  // namespace tampa
