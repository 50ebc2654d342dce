#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "tampa/graph.hpp"
#include "tampa/rng.hpp"

using namespace tampa;

namespace {

PatrolGraph line3(double w12 = 1.0, double w23 = 1.0) {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {1, 0});
  g.add_node(3, {2, 0});
  g.add_edge_pair(1, 2, w12);
  g.add_edge_pair(2, 3, w23);
  return g;
}

EdgeTimes uniform_times(const PatrolGraph& g, double w) {
  EdgeTimes t;
  for (const Edge& e : g.edges()) t[e] = w;
  return t;
}

// Random connected graph with symmetric lengths; node ids 1..n.
PatrolGraph random_graph(Rng& rng, int n, double extra_edge_prob = 0.4) {
  PatrolGraph g;
  for (int i = 1; i <= n; ++i) g.add_node(i, {rng.uniform01() * 10, rng.uniform01() * 10});
  for (int i = 2; i <= n; ++i) {
    int parent = 1 + rng.uniform_below(i - 1);
    g.add_edge_pair(i, parent, 0.5 + 9.5 * rng.uniform01());
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (!g.has_edge(i, j) && rng.uniform01() < extra_edge_prob) {
        g.add_edge_pair(i, j, 0.5 + 9.5 * rng.uniform01());
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("construction rejects self loops, duplicates and bad lengths") {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {1, 1});
  CHECK_THROWS_AS(g.add_edge_pair(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge_pair(1, 2, 0.0), std::invalid_argument);
  g.add_edge_pair(1, 2, 2.0);
  CHECK_THROWS_AS(g.add_edge_pair(2, 1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(g.add_node(2, {0, 0}), std::invalid_argument);
  CHECK(g.length(1, 2) == g.length(2, 1));
}

TEST_CASE("neighbors include the node itself") {
  PatrolGraph g;
  g.add_node(7, {0, 0});
  CHECK(g.neighbors(7) == std::vector<NodeId>{7});
  CHECK_THROWS_AS(g.neighbors(8), std::invalid_argument);

  PatrolGraph line = line3();
  CHECK(line.neighbors(2) == std::vector<NodeId>{1, 2, 3});
  CHECK(line.out_neighbors(2) == std::vector<NodeId>{1, 3});
}

TEST_CASE("neighbors after splitting contain the new node instead") {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {4, 0});
  g.add_edge_pair(1, 2, 4.0);
  auto [split_graph, split] = g.split_edge(1, 2, 0.5);
  CHECK(split.mid == 3);
  CHECK(split_graph.neighbors(1) == std::vector<NodeId>{1, 3});
  CHECK(split_graph.neighbors(3) == std::vector<NodeId>{1, 2, 3});
  CHECK_FALSE(split_graph.has_edge(1, 2));
}

TEST_CASE("shortest path of a node to itself is empty and zero") {
  PatrolGraph g = line3();
  auto r = shortest_path(g, uniform_times(g, 4.0), 2, 2);
  REQUIRE(r.has_value());
  CHECK(r->edges.empty());
  CHECK(r->distance == 0.0);
}

TEST_CASE("line graph path sums edge times") {
  PatrolGraph g = line3(4.0, 4.0);
  auto r = shortest_path(g, uniform_times(g, 4.0), 1, 3);
  REQUIRE(r.has_value());
  CHECK(r->distance == doctest::Approx(8.0));
  REQUIRE(r->edges.size() == 2);
  CHECK(r->edges[0] == Edge{1, 2});
  CHECK(r->edges[1] == Edge{2, 3});
}

TEST_CASE("triangle picks the cheaper two-hop route") {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {2, 0});
  g.add_node(3, {1, 1});
  g.add_edge_pair(1, 2, 1.0);
  g.add_edge_pair(1, 3, 1.0);
  g.add_edge_pair(3, 2, 1.0);
  EdgeTimes t;
  t[{1, 2}] = t[{2, 1}] = 10.0;
  t[{1, 3}] = t[{3, 1}] = 3.0;
  t[{3, 2}] = t[{2, 3}] = 3.0;
  auto r = shortest_path(g, t, 1, 2);
  REQUIRE(r.has_value());
  CHECK(r->distance == doctest::Approx(6.0));
  REQUIRE(r->edges.size() == 2);
  CHECK(r->edges[0] == Edge{1, 3});
}

TEST_CASE("equal-cost routes break ties toward the smaller node sequence") {
  // 1 -> {2,3} -> 4, all weights equal: path through 2 wins.
  PatrolGraph g;
  for (int i = 1; i <= 4; ++i) g.add_node(i, {0, 0});
  g.add_edge_pair(1, 2, 1.0);
  g.add_edge_pair(1, 3, 1.0);
  g.add_edge_pair(2, 4, 1.0);
  g.add_edge_pair(3, 4, 1.0);
  auto r = shortest_path(g, uniform_times(g, 2.0), 1, 4);
  REQUIRE(r.has_value());
  CHECK(r->edges[0] == Edge{1, 2});
}

TEST_CASE("disconnected nodes report unreachable") {
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {1, 0});
  CHECK_FALSE(shortest_path(g, {}, 1, 2).has_value());
  CHECK_THROWS_AS(shortest_path(g, {}, 1, 9), std::invalid_argument);
}

TEST_CASE("shortest path distances satisfy the triangle property") {
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    PatrolGraph g = random_graph(rng, 2 + rng.uniform_below(5));
    EdgeTimes t;
    for (const Edge& e : g.edges()) t[e] = 0.5 + 9.5 * rng.uniform01();
    std::vector<NodeId> nodes = g.node_ids();
    for (NodeId i : nodes) {
      for (NodeId j : nodes) {
        auto dij = shortest_path(g, t, i, j);
        REQUIRE(dij.has_value());
        for (NodeId m : nodes) {
          auto dim = shortest_path(g, t, i, m);
          auto dmj = shortest_path(g, t, m, j);
          CHECK(dij->distance <= dim->distance + dmj->distance + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("split rejects degenerate and invalid ratios") {
  PatrolGraph g = line3();
  CHECK_THROWS_AS(g.split_edge(1, 3, 0.5), std::invalid_argument);  // not an edge
  CHECK_THROWS_AS(g.split_edge(1, 2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(g.split_edge(1, 2, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(g.split_edge(1, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(g.split_edge(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(g.split_edge(1, 2, 1e-9), std::invalid_argument);
}

TEST_CASE("split conserves length exactly") {
  PatrolGraph g = line3(10.0, 3.0);
  auto [next, split] = g.split_edge(1, 2, 0.5);
  CHECK(next.length(1, split.mid) == doctest::Approx(5.0));
  CHECK(next.length(split.mid, 2) == doctest::Approx(5.0));
  CHECK(next.length(1, split.mid) + next.length(split.mid, 2) ==
        doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("split places the new node on the segment with fresh id") {
  Rng rng(808);
  for (int trial = 0; trial < 1000; ++trial) {
    PatrolGraph g = random_graph(rng, 3 + rng.uniform_below(5));
    std::vector<Edge> edges = g.edges();
    Edge e = edges[rng.uniform_below(static_cast<int>(edges.size()))];
    double gamma = 0.01 + 0.98 * rng.uniform01();
    double full = g.length(e.from, e.to);
    NodeId before_max = g.max_node_id();

    auto [next, split] = g.split_edge(e.from, e.to, gamma);
    CHECK(split.mid == before_max + 1);
    // conservation of both directions
    CHECK(next.length(e.from, split.mid) + next.length(split.mid, e.to) ==
          doctest::Approx(full).epsilon(1e-9));
    CHECK(next.length(split.mid, e.from) == doctest::Approx(next.length(e.from, split.mid)));
    // collinearity
    Vec2 a = g.coord(e.from), b = g.coord(e.to), m = next.coord(split.mid);
    double cross = (b.x - a.x) * (m.y - a.y) - (b.y - a.y) * (m.x - a.x);
    CHECK(std::abs(cross) < 1e-9);
    CHECK(m.x == doctest::Approx((1 - gamma) * a.x + gamma * b.x));
    // reciprocal pair invariant survives
    CHECK(next.has_edge(split.mid, e.from));
    CHECK(next.has_edge(e.to, split.mid));
    CHECK_FALSE(next.has_edge(e.from, e.to));
    CHECK_FALSE(next.has_edge(e.to, e.from));
  }
}

TEST_CASE("splitting never changes distances between pre-existing nodes") {
  Rng rng(909);
  for (int trial = 0; trial < 30; ++trial) {
    PatrolGraph g = random_graph(rng, 3 + rng.uniform_below(4));
    EdgeTimes t;
    for (const Edge& e : g.edges()) t[e] = 0.5 + 9.5 * rng.uniform01();

    std::vector<Edge> edges = g.edges();
    Edge e = edges[rng.uniform_below(static_cast<int>(edges.size()))];
    double gamma = 0.05 + 0.9 * rng.uniform01();
    auto [next, split] = g.split_edge(e.from, e.to, gamma);

    EdgeTimes t2 = t;
    double mu_fwd = t2.at({e.from, e.to});
    double mu_rev = t2.at({e.to, e.from});
    t2.erase({e.from, e.to});
    t2.erase({e.to, e.from});
    t2[{e.from, split.mid}] = mu_fwd * gamma;
    t2[{split.mid, e.to}] = mu_fwd * (1 - gamma);
    t2[{e.to, split.mid}] = mu_rev * (1 - gamma);
    t2[{split.mid, e.from}] = mu_rev * gamma;

    for (NodeId i : g.node_ids()) {
      for (NodeId j : g.node_ids()) {
        auto before = shortest_path(g, t, i, j);
        auto after = shortest_path(next, t2, i, j);
        REQUIRE(before.has_value());
        REQUIRE(after.has_value());
        CHECK(after->distance == doctest::Approx(before->distance).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("lineage spans track nested splits") {
  PatrolGraph g = line3(8.0, 3.0);
  EdgeLineage lineage = identity_lineage(g);
  auto [g2, s1] = g.split_edge(1, 2, 0.25);
  apply_split_to_lineage(lineage, s1);
  const EdgeSpan& left = lineage.at({1, s1.mid});
  CHECK(left.root == Edge{1, 2});
  CHECK(left.lo == doctest::Approx(0.0));
  CHECK(left.hi == doctest::Approx(0.25));
  const EdgeSpan& rev = lineage.at({2, s1.mid});
  CHECK(rev.root == Edge{2, 1});
  CHECK(rev.hi == doctest::Approx(0.75));

  auto [g3, s2] = g2.split_edge(s1.mid, 2, 0.5);
  apply_split_to_lineage(lineage, s2);
  const EdgeSpan& mid = lineage.at({s1.mid, s2.mid});
  CHECK(mid.root == Edge{1, 2});
  CHECK(mid.lo == doctest::Approx(0.25));
  CHECK(mid.hi == doctest::Approx(0.625));
}

TEST_CASE("commute adaptation splits the commuting edge at the elapsed ratio") {
  // depart 100, eta 108, now 104: midpoint
  PatrolGraph g = line3(10.0, 4.0);
  EdgeTimes times;
  times[{1, 2}] = times[{2, 1}] = 8.0;
  times[{2, 3}] = times[{3, 2}] = 4.0;
  CommuteAdaptation adapted = adapt_graph_on_commute(g, times, 1, 2, 104, 100, 108, 8);
  NodeId mid = adapted.splits.front().mid;
  CHECK(adapted.patroller_node == mid);
  CHECK(adapted.graph.length(1, mid) == doctest::Approx(5.0));
  CHECK(times.at({1, mid}) == doctest::Approx(4.0));
  CHECK(times.at({mid, 2}) == doctest::Approx(4.0));
}

TEST_CASE("neighbor ratios outside the unit interval skip that split") {
  // Path 4 - 1 - 2 - 3, commuting on (1,2) since 100 with eta 108, now 102.
  PatrolGraph g;
  g.add_node(1, {0, 0});
  g.add_node(2, {4, 0});
  g.add_node(3, {8, 0});
  g.add_node(4, {-4, 0});
  g.add_edge_pair(1, 2, 10.0);
  g.add_edge_pair(2, 3, 4.0);
  g.add_edge_pair(1, 4, 4.0);
  EdgeTimes times;
  times[{1, 2}] = times[{2, 1}] = 8.0;
  times[{2, 3}] = times[{3, 2}] = 4.0;
  times[{1, 4}] = times[{4, 1}] = 4.0;

  // Origin-side neighbor (1,4): remaining slot time 8 - 102 + 100 = 6 over
  // mu = 4 gives 1.5, outside (0,1): skipped. Dest-side neighbor (2,3):
  // (8 - 108 + 102) / 4 = 0.5: split.
  CommuteAdaptation adapted = adapt_graph_on_commute(g, times, 1, 2, 102, 100, 108, 8);
  CHECK(adapted.splits.size() == 2);
  CHECK(adapted.graph.has_edge(1, 4));  // skipped split leaves the edge alone
  CHECK_FALSE(adapted.graph.has_edge(2, 3));
  NodeId nmid = adapted.splits.back().mid;
  CHECK(adapted.graph.has_edge(2, nmid));
  CHECK(times.at({2, nmid}) == doctest::Approx(4.0 * 0.5));
  CHECK(adapted.graph.length(2, nmid) == doctest::Approx(2.0));
}

TEST_CASE("commute adaptation validates its inputs") {
  PatrolGraph g = line3();
  EdgeTimes times = uniform_times(g, 4.0);
  CHECK_THROWS_AS(adapt_graph_on_commute(g, times, 1, 3, 104, 100, 108, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(adapt_graph_on_commute(g, times, 1, 2, 100, 100, 108, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(adapt_graph_on_commute(g, times, 1, 2, 108, 100, 108, 8),
                  std::invalid_argument);
}

TEST_CASE("length symmetry holds after every operation") {
  Rng rng(1212);
  PatrolGraph g = random_graph(rng, 6);
  for (int step = 0; step < 10; ++step) {
    std::vector<Edge> edges = g.edges();
    Edge e = edges[rng.uniform_below(static_cast<int>(edges.size()))];
    auto [next, split] = g.split_edge(e.from, e.to, 0.2 + 0.6 * rng.uniform01());
    g = next;
    for (const Edge& d : g.edges()) {
      CHECK(g.length(d.from, d.to) == doctest::Approx(g.length(d.to, d.from)));
    }
  }
}
