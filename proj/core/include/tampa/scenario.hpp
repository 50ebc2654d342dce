#pragma once

#include <stdexcept>
#include <string>

#include "tampa/graph.hpp"
#include "tampa/traffic.hpp"

namespace tampa {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a run needs besides the seed: the patrol graph with minimum
// travel times, the travel-time generator parameters, and the complaint
// process including scheduled weight shifts.
struct Scenario {
  std::string name;
  int horizon = 700;  // minutes
  NodeId start_node = 1;
  PatrolGraph graph;
  EdgeMap<double> mtt;
  TrafficParams traffic;
  ComplaintProcessParams complaints;

  enum class PriorMode { kTrue, kUniform };
  PriorMode prior_mode = PriorMode::kTrue;

  // Initial belief for an edge: the exact generator distribution under the
  // initial weights, or a flat one.
  ComplaintPmf prior_for(const Edge& e) const;

  // Throws ScenarioError naming the offending field on any inconsistency.
  void validate() const;
};

Scenario scenario_from_json_string(const std::string& text);
std::string scenario_to_json_string(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace tampa
