#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace tampa {

using NodeId = int;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

template <class T>
using EdgeMap = std::map<Edge, T>;

// Travel time per directed edge, one snapshot (e.g. one decision slot).
using EdgeTimes = EdgeMap<double>;

// Directed patrol graph with reciprocal edge pairs, symmetric physical
// lengths, and planar node coordinates. Treated as a value: mutating
// operations return a new snapshot, so a graph handed to a planner or
// another thread never changes underneath it.
class PatrolGraph {
 public:
  // Outcome of splitting one reciprocal edge pair at an interior point.
  // `gamma` is the fraction of (from->to) covered by (from->mid); the
  // reverse direction covers the complementary fraction.
  struct EdgeSplit {
    NodeId from = 0;
    NodeId to = 0;
    NodeId mid = 0;
    double gamma = 0.0;
  };

  void add_node(NodeId id, Vec2 pos);
  // Inserts (a,b) and (b,a) with the shared physical length.
  void add_edge_pair(NodeId a, NodeId b, double length);

  bool has_node(NodeId v) const { return coords_.contains(v); }
  bool has_edge(NodeId i, NodeId j) const { return lengths_.contains({i, j}); }
  std::size_t num_nodes() const { return coords_.size(); }
  std::size_t num_edge_pairs() const { return lengths_.size() / 2; }

  std::vector<NodeId> node_ids() const;
  // All directed edges in sorted order.
  std::vector<Edge> edges() const;

  // {u : (v,u) in E} plus v itself.
  std::vector<NodeId> neighbors(NodeId v) const;
  // Outgoing neighbors only.
  std::vector<NodeId> out_neighbors(NodeId v) const;

  double length(NodeId i, NodeId j) const;
  Vec2 coord(NodeId v) const;
  NodeId max_node_id() const;

  // Replaces (o,d) and (d,o) with edges through a new node placed at the
  // gamma point from o toward d; lengths split gamma : 1-gamma. Ratios
  // within 1e-6 of the endpoints are rejected, they would create
  // zero-length edges.
  std::pair<PatrolGraph, EdgeSplit> split_edge(NodeId o, NodeId d, double gamma) const;

  double median_edge_length() const;

 private:
  void require_node(NodeId v) const;

  std::map<NodeId, Vec2> coords_;
  std::map<NodeId, std::vector<NodeId>> adjacency_;  // sorted out-neighbors
  EdgeMap<double> lengths_;
};

struct PathResult {
  std::vector<Edge> edges;  // empty when from == to
  double distance = 0.0;
};

// Minimum-total-time simple path under `times`; among equal-time paths the
// lexicographically smallest node sequence wins, which pins down plans and
// trajectories for reproducibility. Returns nullopt when unreachable.
// Throws std::invalid_argument for unknown nodes.
std::optional<PathResult> shortest_path(const PatrolGraph& g, const EdgeTimes& times,
                                        NodeId from, NodeId to);

// Where a current directed edge sits inside the original edge it descends
// from, as the interval [lo, hi) of the root's from->to parametrization.
// Tracks travel-time scaling and complaint-stream spans across splits.
struct EdgeSpan {
  Edge root;
  double lo = 0.0;
  double hi = 1.0;
  double fraction() const { return hi - lo; }
};

using EdgeLineage = EdgeMap<EdgeSpan>;

EdgeLineage identity_lineage(const PatrolGraph& g);

// Rewrites the two directed entries replaced by `split` into the four
// half-edge entries.
void apply_split_to_lineage(EdgeLineage& lineage, const PatrolGraph::EdgeSplit& split);

struct CommuteAdaptation {
  PatrolGraph graph;
  NodeId patroller_node = 0;
  // Commuting edge split first, then any neighbor-edge splits.
  std::vector<PatrolGraph::EdgeSplit> splits;
};

// Adaptation applied when a distribution shift is detected while the
// patroller is part-way along edge (origin, dest): the commuting edge is
// split at the elapsed-time ratio (t - depart) / (eta - depart), putting a
// node at the patroller's interpolated position so the next plan can start
// there (including a U-turn). Each other edge out of `origin` is split at
// (tau - t + depart) / mu(edge) and each other edge out of `dest` at
// (tau - eta + t) / mu(edge); ratios outside (0, 1) skip that split.
// `travel_times` provides mu per directed edge and is rewritten in place,
// split halves receiving the ratio-scaled shares.
CommuteAdaptation adapt_graph_on_commute(const PatrolGraph& g, EdgeTimes& travel_times,
                                         NodeId origin, NodeId dest, int t, int depart_time,
                                         int eta, int tau);

}  // namespace tampa
