#include "tampa/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tampa {

namespace {

using nlohmann::json;

std::string edge_key(const Edge& e) {
  return std::to_string(e.from) + "-" + std::to_string(e.to);
}

Edge parse_edge_key(const std::string& key) {
  auto dash = key.find('-');
  if (dash == std::string::npos) throw ScenarioError("bad edge key '" + key + "'");
  try {
    return Edge{std::stoi(key.substr(0, dash)), std::stoi(key.substr(dash + 1))};
  } catch (const std::exception&) {
    throw ScenarioError("bad edge key '" + key + "'");
  }
}

// Weight maps in the file are per undirected pair; both directions carry the
// same value in memory.
EdgeMap<double> parse_weight_map(const json& j, const PatrolGraph& graph,
                                 const std::string& where) {
  EdgeMap<double> weights;
  for (const auto& [key, value] : j.items()) {
    Edge e = parse_edge_key(key);
    if (!graph.has_edge(e.from, e.to)) {
      throw ScenarioError(where + ": weight on unknown edge " + key);
    }
    double f = value.get<double>();
    if (f < 0.0) throw ScenarioError(where + ": negative weight on edge " + key);
    weights[e] = f;
    weights[{e.to, e.from}] = f;
  }
  for (const Edge& e : graph.edges()) {
    if (!weights.contains(e)) {
      throw ScenarioError(where + ": missing weight for edge " + edge_key(e));
    }
  }
  return weights;
}

json weight_map_to_json(const EdgeMap<double>& weights) {
  json j = json::object();
  for (const auto& [e, f] : weights) {
    if (e.from < e.to) j[edge_key(e)] = f;
  }
  return j;
}

}  // namespace

ComplaintPmf Scenario::prior_for(const Edge& e) const {
  if (prior_mode == PriorMode::kUniform) {
    return ComplaintPmf::uniform(0, complaints.cap, complaints.cap);
  }
  return true_complaint_pmf(complaints.weights.at(e), complaints.cap, complaints.noise_mean,
                            complaints.noise_std);
}

void Scenario::validate() const {
  if (horizon < 1) throw ScenarioError("horizon must be at least one minute");
  if (graph.num_nodes() == 0) throw ScenarioError("graph: no nodes");
  if (!graph.has_node(start_node)) {
    throw ScenarioError("start_node " + std::to_string(start_node) + " not in graph");
  }
  for (const Edge& e : graph.edges()) {
    if (!mtt.contains(e)) throw ScenarioError("edge " + edge_key(e) + ": missing mtt");
    if (!(mtt.at(e) > 0.0)) throw ScenarioError("edge " + edge_key(e) + ": mtt must be positive");
    if (std::abs(graph.length(e.from, e.to) - graph.length(e.to, e.from)) > 1e-12) {
      throw ScenarioError("edge " + edge_key(e) + ": asymmetric lengths");
    }
    if (!complaints.weights.contains(e)) {
      throw ScenarioError("edge " + edge_key(e) + ": missing complaint weight");
    }
  }
  if (traffic.base <= 0.0) throw ScenarioError("traffic.base must be positive");
  if (traffic.noise_std < 0.0) throw ScenarioError("traffic.noise_std must be non-negative");
  if (traffic.diurnal_period < 1) throw ScenarioError("traffic.diurnal_period must be positive");
  if (complaints.cap < 0) throw ScenarioError("complaints.cap must be non-negative");

  int last_t = 0;
  for (size_t i = 0; i < complaints.shifts.size(); ++i) {
    const ShiftEvent& shift = complaints.shifts[i];
    if (shift.t <= last_t) {
      throw ScenarioError("complaints.shifts: times must be strictly increasing");
    }
    if (shift.t >= horizon) {
      throw ScenarioError("complaints.shifts: shift at t=" + std::to_string(shift.t) +
                          " is outside the horizon");
    }
    for (const Edge& e : graph.edges()) {
      if (!shift.weights.contains(e)) {
        throw ScenarioError("complaints.shifts[" + std::to_string(i) +
                            "]: missing weight for edge " + edge_key(e));
      }
    }
    last_t = shift.t;
  }
}

Scenario scenario_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ScenarioError(std::string("scenario parse error: ") + err.what());
  }

  Scenario s;
  try {
    s.name = j.value("name", "scenario");
    s.horizon = j.at("horizon").get<int>();
    s.start_node = j.at("start_node").get<int>();

    const json& jg = j.at("graph");
    for (const auto& jn : jg.at("nodes")) {
      s.graph.add_node(jn.at("id").get<int>(),
                       {jn.at("x").get<double>(), jn.at("y").get<double>()});
    }
    for (const auto& je : jg.at("edges")) {
      NodeId from = je.at("from").get<int>();
      NodeId to = je.at("to").get<int>();
      double length = je.at("length").get<double>();
      double mtt = je.at("mtt").get<double>();
      if (s.graph.has_edge(from, to)) {
        // A reciprocal listing is allowed but must agree with the first one.
        if (std::abs(s.graph.length(from, to) - length) > 1e-12) {
          throw ScenarioError("edge " + std::to_string(from) + "-" + std::to_string(to) +
                              ": asymmetric lengths in file");
        }
        if (std::abs(s.mtt.at({from, to}) - mtt) > 1e-12) {
          throw ScenarioError("edge " + std::to_string(from) + "-" + std::to_string(to) +
                              ": asymmetric mtt in file");
        }
        continue;
      }
      s.graph.add_edge_pair(from, to, length);
      s.mtt[{from, to}] = mtt;
      s.mtt[{to, from}] = mtt;
    }

    if (j.contains("traffic")) {
      const json& jt = j.at("traffic");
      s.traffic.base = jt.value("base", s.traffic.base);
      s.traffic.diurnal_amplitude = jt.value("diurnal_amplitude", s.traffic.diurnal_amplitude);
      s.traffic.diurnal_period = jt.value("diurnal_period", s.traffic.diurnal_period);
      s.traffic.noise_std = jt.value("noise_std", s.traffic.noise_std);
    }

    const json& jc = j.at("complaints");
    s.complaints.cap = jc.value("cap", kDefaultComplaintCap);
    s.complaints.noise_mean = jc.value("noise_mean", 0.5);
    s.complaints.noise_std = jc.value("noise_std", 0.2);
    s.complaints.weights = parse_weight_map(jc.at("weights"), s.graph, "complaints.weights");
    if (jc.contains("shifts")) {
      for (const auto& js : jc.at("shifts")) {
        ShiftEvent shift;
        shift.t = js.at("t").get<int>();
        shift.weights = parse_weight_map(js.at("weights"), s.graph, "complaints.shifts");
        s.complaints.shifts.push_back(std::move(shift));
      }
    }

    std::string prior = j.value("priors", json::object()).value("mode", "true");
    if (prior == "true") {
      s.prior_mode = Scenario::PriorMode::kTrue;
    } else if (prior == "uniform") {
      s.prior_mode = Scenario::PriorMode::kUniform;
    } else {
      throw ScenarioError("priors.mode must be 'true' or 'uniform'");
    }
  } catch (const json::exception& err) {
    throw ScenarioError(std::string("scenario field error: ") + err.what());
  }

  s.validate();
  return s;
}

std::string scenario_to_json_string(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["horizon"] = s.horizon;
  j["start_node"] = s.start_node;

  json nodes = json::array();
  for (NodeId id : s.graph.node_ids()) {
    Vec2 p = s.graph.coord(id);
    nodes.push_back({{"id", id}, {"x", p.x}, {"y", p.y}});
  }
  json edges = json::array();
  for (const Edge& e : s.graph.edges()) {
    if (e.from < e.to) {
      edges.push_back({{"from", e.from},
                       {"to", e.to},
                       {"length", s.graph.length(e.from, e.to)},
                       {"mtt", s.mtt.at(e)}});
    }
  }
  j["graph"] = {{"nodes", nodes}, {"edges", edges}};

  j["traffic"] = {{"base", s.traffic.base},
                  {"diurnal_amplitude", s.traffic.diurnal_amplitude},
                  {"diurnal_period", s.traffic.diurnal_period},
                  {"noise_std", s.traffic.noise_std}};

  json jc;
  jc["cap"] = s.complaints.cap;
  jc["noise_mean"] = s.complaints.noise_mean;
  jc["noise_std"] = s.complaints.noise_std;
  jc["weights"] = weight_map_to_json(s.complaints.weights);
  json shifts = json::array();
  for (const ShiftEvent& shift : s.complaints.shifts) {
    shifts.push_back({{"t", shift.t}, {"weights", weight_map_to_json(shift.weights)}});
  }
  jc["shifts"] = shifts;
  j["complaints"] = jc;

  j["priors"] = {{"mode", s.prior_mode == Scenario::PriorMode::kTrue ? "true" : "uniform"}};
  return j.dump(2);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json_string(buffer.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file: " + path);
  out << scenario_to_json_string(scenario) << "\n";
}

}  // namespace tampa
