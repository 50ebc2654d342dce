#pragma once

#include <span>
#include <vector>

#include "tampa/complaints.hpp"
#include "tampa/graph.hpp"

namespace tampa {

struct PlanningWindow {
  int start = 0;      // absolute minute
  int tau = 8;        // slot length, minutes
  int num_slots = 6;  // decision slots

  int horizon() const { return tau * num_slots; }
  int slot_start(int k) const { return start + k * tau; }
};

struct Plan {
  std::vector<NodeId> actions;  // one per slot
  double value = 0.0;           // optimal objective
  NodeId first_action = 0;
};

// One planning-window decision problem over a graph snapshot. States are
// nodes; the slot-k action set is every node whose predicted shortest-path
// time is within one slot; moving costs predicted travel time while staying
// or passing an edge earns its forecast complaint load. All shortest paths
// are precomputed per (slot, source) at construction.
class WindowMdp {
 public:
  WindowMdp(PatrolGraph graph, NodeId start_node, std::vector<EdgeTimes> slot_times,
            EdgeMap<ComplaintPmf> pmfs, double lambda, double zeta, int tau);

  const PatrolGraph& graph() const { return graph_; }
  NodeId start_node() const { return start_node_; }
  int num_slots() const { return static_cast<int>(slot_times_.size()); }
  double lambda() const { return lambda_; }
  int tau() const { return tau_; }

  // Nodes reachable from s within tau under slot-k predictions, s included;
  // sorted ascending.
  const std::vector<NodeId>& action_set(NodeId s, int k) const;

  // Predicted travel time to a, 0 when staying. Throws for infeasible a.
  double routing_cost(NodeId s, NodeId a, int k) const;

  // Expected complaints addressed by the action: the neighborhood sum
  // (capped by the inspection radius zeta) when staying, the path sum when
  // moving. Per-edge expectation is the pmf mean accumulated over the k+1
  // slots elapsed since the window start.
  double complaint_cost(NodeId s, NodeId a, int k) const;

  double reward(NodeId s, NodeId a, int k) const;

  // Edges of the predicted shortest path used by action (s -> a) at slot k.
  const std::vector<Edge>& path_edges(NodeId s, NodeId a, int k) const;

  // Exact backward induction; per-state argmax ties break toward the
  // smallest node id.
  Plan solve() const;

 private:
  struct SourceTable {
    std::vector<NodeId> actions;                 // reachable within tau, sorted
    std::map<NodeId, double> distance;           // to every reachable node
    std::map<NodeId, std::vector<Edge>> path;    // shortest-path edges
  };
  const SourceTable& table(NodeId s, int k) const;

  PatrolGraph graph_;
  NodeId start_node_ = 0;
  std::vector<EdgeTimes> slot_times_;
  EdgeMap<ComplaintPmf> pmfs_;
  double lambda_ = 0.5;
  double zeta_ = 1.0;
  int tau_ = 8;
  // tables_[k][s]
  std::vector<std::map<NodeId, SourceTable>> tables_;
};

// Start of the next window after executing `action` from `node` at `start`:
// the realized leg times of the traversed path, each rounded to a whole
// minute (at least one), or one full slot when the action is to stay and
// inspect.
int next_window_start(int start, NodeId node, NodeId action,
                      std::span<const double> realized_leg_times, int tau);

}  // namespace tampa
