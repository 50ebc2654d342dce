#include "tampa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace tampa {

namespace {

constexpr double kSplitEps = 1e-6;

std::string edge_str(NodeId i, NodeId j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

void PatrolGraph::require_node(NodeId v) const {
  if (!has_node(v)) throw std::invalid_argument("unknown node " + std::to_string(v));
}

void PatrolGraph::add_node(NodeId id, Vec2 pos) {
  if (has_node(id)) throw std::invalid_argument("duplicate node " + std::to_string(id));
  coords_[id] = pos;
  adjacency_[id];
}

void PatrolGraph::add_edge_pair(NodeId a, NodeId b, double length) {
  require_node(a);
  require_node(b);
  if (a == b) throw std::invalid_argument("self-loop edge " + edge_str(a, b));
  if (has_edge(a, b) || has_edge(b, a)) {
    throw std::invalid_argument("duplicate edge " + edge_str(a, b));
  }
  if (!(length > 0.0)) throw std::invalid_argument("non-positive length on " + edge_str(a, b));
  lengths_[{a, b}] = length;
  lengths_[{b, a}] = length;
  auto insert_sorted = [](std::vector<NodeId>& v, NodeId x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

std::vector<NodeId> PatrolGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(coords_.size());
  for (const auto& [id, _] : coords_) out.push_back(id);
  return out;
}

std::vector<Edge> PatrolGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(lengths_.size());
  for (const auto& [e, _] : lengths_) out.push_back(e);
  return out;
}

std::vector<NodeId> PatrolGraph::neighbors(NodeId v) const {
  require_node(v);
  std::vector<NodeId> out = adjacency_.at(v);
  out.insert(std::lower_bound(out.begin(), out.end(), v), v);
  return out;
}

std::vector<NodeId> PatrolGraph::out_neighbors(NodeId v) const {
  require_node(v);
  return adjacency_.at(v);
}

double PatrolGraph::length(NodeId i, NodeId j) const {
  auto it = lengths_.find({i, j});
  if (it == lengths_.end()) throw std::invalid_argument("no edge " + edge_str(i, j));
  return it->second;
}

Vec2 PatrolGraph::coord(NodeId v) const {
  require_node(v);
  return coords_.at(v);
}

NodeId PatrolGraph::max_node_id() const {
  if (coords_.empty()) return 0;
  return coords_.rbegin()->first;
}

std::pair<PatrolGraph, PatrolGraph::EdgeSplit> PatrolGraph::split_edge(NodeId o, NodeId d,
                                                                       double gamma) const {
  if (!has_edge(o, d)) throw std::invalid_argument("no edge " + edge_str(o, d) + " to split");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("split ratio outside [0,1]");
  if (gamma < kSplitEps || gamma > 1.0 - kSplitEps) {
    throw std::invalid_argument("degenerate split ratio " + std::to_string(gamma) +
                                " on " + edge_str(o, d));
  }

  PatrolGraph next = *this;
  NodeId mid = next.max_node_id() + 1;
  Vec2 po = coord(o), pd = coord(d);
  next.add_node(mid, {(1.0 - gamma) * po.x + gamma * pd.x, (1.0 - gamma) * po.y + gamma * pd.y});

  double full = length(o, d);
  auto erase_edge = [&next](NodeId i, NodeId j) {
    next.lengths_.erase({i, j});
    auto& adj = next.adjacency_[i];
    adj.erase(std::lower_bound(adj.begin(), adj.end(), j));
  };
  erase_edge(o, d);
  erase_edge(d, o);
  next.add_edge_pair(o, mid, full * gamma);
  next.add_edge_pair(mid, d, full * (1.0 - gamma));

  return {std::move(next), EdgeSplit{o, d, mid, gamma}};
}

double PatrolGraph::median_edge_length() const {
  if (lengths_.empty()) throw std::logic_error("median length of edgeless graph");
  std::vector<double> ls;
  for (const auto& [e, l] : lengths_) {
    if (e.from < e.to) ls.push_back(l);
  }
  std::sort(ls.begin(), ls.end());
  size_t n = ls.size();
  return n % 2 == 1 ? ls[n / 2] : 0.5 * (ls[n / 2 - 1] + ls[n / 2]);
}

std::optional<PathResult> shortest_path(const PatrolGraph& g, const EdgeTimes& times,
                                        NodeId from, NodeId to) {
  if (!g.has_node(from)) throw std::invalid_argument("unknown node " + std::to_string(from));
  if (!g.has_node(to)) throw std::invalid_argument("unknown node " + std::to_string(to));
  if (from == to) return PathResult{{}, 0.0};

  // Dijkstra over labels (distance, node sequence). Appending a common
  // suffix preserves lexicographic order between distinct prefixes, so the
  // first time a node is settled its label is both time-minimal and
  // lexicographically smallest among time-minimal paths.
  struct Label {
    double dist;
    std::vector<NodeId> path;
    bool operator>(const Label& other) const {
      if (dist != other.dist) return dist > other.dist;
      return path > other.path;
    }
  };
  std::priority_queue<Label, std::vector<Label>, std::greater<Label>> queue;
  std::map<NodeId, bool> settled;
  queue.push({0.0, {from}});

  while (!queue.empty()) {
    Label cur = queue.top();
    queue.pop();
    NodeId node = cur.path.back();
    if (settled[node]) continue;
    settled[node] = true;
    if (node == to) {
      PathResult result;
      result.distance = cur.dist;
      for (size_t i = 0; i + 1 < cur.path.size(); ++i) {
        result.edges.push_back({cur.path[i], cur.path[i + 1]});
      }
      return result;
    }
    for (NodeId next : g.out_neighbors(node)) {
      if (settled[next]) continue;
      auto it = times.find({node, next});
      if (it == times.end()) continue;  // edge without a weight is impassable
      Label lab{cur.dist + it->second, cur.path};
      lab.path.push_back(next);
      queue.push(std::move(lab));
    }
  }
  return std::nullopt;
}

EdgeLineage identity_lineage(const PatrolGraph& g) {
  EdgeLineage lineage;
  for (const Edge& e : g.edges()) lineage[e] = EdgeSpan{e, 0.0, 1.0};
  return lineage;
}

void apply_split_to_lineage(EdgeLineage& lineage, const PatrolGraph::EdgeSplit& split) {
  Edge fwd{split.from, split.to};
  Edge rev{split.to, split.from};
  EdgeSpan sf = lineage.at(fwd);
  EdgeSpan sr = lineage.at(rev);
  lineage.erase(fwd);
  lineage.erase(rev);
  double cut_f = sf.lo + split.gamma * (sf.hi - sf.lo);
  lineage[{split.from, split.mid}] = EdgeSpan{sf.root, sf.lo, cut_f};
  lineage[{split.mid, split.to}] = EdgeSpan{sf.root, cut_f, sf.hi};
  // The reverse direction is parametrized from `to`, so the patroller's
  // point sits at 1-gamma along it.
  double cut_r = sr.lo + (1.0 - split.gamma) * (sr.hi - sr.lo);
  lineage[{split.to, split.mid}] = EdgeSpan{sr.root, sr.lo, cut_r};
  lineage[{split.mid, split.from}] = EdgeSpan{sr.root, cut_r, sr.hi};
}

namespace {

// Splits (o, u) at `ratio` if the ratio is usable, updating travel times for
// the two halves. Returns the split record, or nullopt when skipped.
std::optional<PatrolGraph::EdgeSplit> try_neighbor_split(PatrolGraph& g, EdgeTimes& times,
                                                         NodeId o, NodeId u, double ratio) {
  if (!(ratio > kSplitEps && ratio < 1.0 - kSplitEps)) return std::nullopt;
  auto [next, split] = g.split_edge(o, u, ratio);
  g = std::move(next);
  double mu_fwd = times.at({o, u});
  double mu_rev = times.at({u, o});
  times.erase({o, u});
  times.erase({u, o});
  times[{o, split.mid}] = mu_fwd * ratio;
  times[{split.mid, u}] = mu_fwd * (1.0 - ratio);
  times[{u, split.mid}] = mu_rev * (1.0 - ratio);
  times[{split.mid, o}] = mu_rev * ratio;
  return split;
}

}  // namespace

CommuteAdaptation adapt_graph_on_commute(const PatrolGraph& g, EdgeTimes& travel_times,
                                         NodeId origin, NodeId dest, int t, int depart_time,
                                         int eta, int tau) {
  if (!g.has_edge(origin, dest)) {
    throw std::invalid_argument("patroller is not commuting on an edge " +
                                edge_str(origin, dest));
  }
  if (!(depart_time < t && t < eta)) {
    throw std::invalid_argument("adaptation time must fall strictly inside the commute");
  }

  CommuteAdaptation result;
  result.graph = g;

  double gamma = static_cast<double>(t - depart_time) / static_cast<double>(eta - depart_time);
  auto main_split = try_neighbor_split(result.graph, travel_times, origin, dest, gamma);
  if (!main_split) {
    // Unreachable with integer clocks; guarded so degenerate ratios cannot
    // silently drop the patroller relocation.
    throw std::logic_error("degenerate commute split ratio");
  }
  result.patroller_node = main_split->mid;
  result.splits.push_back(*main_split);

  // Remaining slot time measured from each endpoint decides how far along
  // each incident edge the patroller could alternatively be by now.
  for (NodeId u : g.out_neighbors(origin)) {
    if (u == dest) continue;
    double mu = travel_times.at({origin, u});
    double ratio = static_cast<double>(tau - t + depart_time) / mu;
    if (auto split = try_neighbor_split(result.graph, travel_times, origin, u, ratio)) {
      result.splits.push_back(*split);
    }
  }
  for (NodeId u : g.out_neighbors(dest)) {
    if (u == origin) continue;
    double mu = travel_times.at({dest, u});
    double ratio = static_cast<double>(tau - eta + t) / mu;
    if (auto split = try_neighbor_split(result.graph, travel_times, dest, u, ratio)) {
      result.splits.push_back(*split);
    }
  }
  return result;
}

}  // namespace tampa
