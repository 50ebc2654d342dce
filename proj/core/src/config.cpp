#include "tampa/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tampa {

namespace {

using nlohmann::json;

void parse_detector(const json& jd, ShiftConfig& detector) {
  if (jd.contains("q_policy")) {
    const json& q = jd.at("q_policy");
    if (q.is_string()) {
      if (q.get<std::string>() != "dkw") {
        throw ConfigError("detector.q_policy must be \"dkw\" or a fixed number");
      }
      detector.fixed_q.reset();
    } else {
      detector.fixed_q = q.get<double>();
      if (!(*detector.fixed_q > 0.0 && *detector.fixed_q <= 1.0)) {
        throw ConfigError("detector.q_policy fixed value must lie in (0, 1]");
      }
    }
  }
  if (jd.contains("aggregator")) {
    const json& agg = jd.at("aggregator");
    if (agg.is_string()) {
      std::string mode = agg.get<std::string>();
      if (mode == "all") {
        detector.aggregator.mode = AggregatorConfig::Mode::kAll;
      } else if (mode == "any") {
        detector.aggregator.mode = AggregatorConfig::Mode::kAny;
      } else {
        throw ConfigError("detector.aggregator must be \"all\", \"any\" or {\"fraction\": x}");
      }
    } else {
      detector.aggregator.mode = AggregatorConfig::Mode::kFraction;
      detector.aggregator.fraction = agg.at("fraction").get<double>();
      if (!(detector.aggregator.fraction > 0.0 && detector.aggregator.fraction <= 1.0)) {
        throw ConfigError("detector.aggregator.fraction must lie in (0, 1]");
      }
    }
  }
  if (jd.contains("distance")) {
    std::string d = jd.at("distance").get<std::string>();
    if (d == "cdf") {
      detector.distance = DistanceForm::kCdf;
    } else if (d == "pmf") {
      detector.distance = DistanceForm::kPmf;
    } else {
      throw ConfigError("detector.distance must be \"cdf\" or \"pmf\"");
    }
  }
  if (jd.contains("source")) {
    std::string s = jd.at("source").get<std::string>();
    if (s == "block") {
      detector.compare_block = true;
    } else if (s == "estimator") {
      detector.compare_block = false;
    } else {
      throw ConfigError("detector.source must be \"block\" or \"estimator\"");
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scenario_path.empty()) throw ConfigError("scenario path is required");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (engine.planner.tau < 1) throw ConfigError("planner.tau must be at least one minute");
  if (engine.planner.num_slots < 1) throw ConfigError("planner.num_slots must be at least 1");
  if (engine.planner.lambda < 0.0 || engine.planner.lambda > 1.0) {
    throw ConfigError("planner.lambda must lie in [0, 1]");
  }
  if (engine.planner.zeta && !(*engine.planner.zeta > 0.0)) {
    throw ConfigError("planner.zeta must be positive");
  }
  if (engine.estimator.prior_weight < 1) {
    throw ConfigError("estimator.prior_weight must be at least 1");
  }
  for (const std::string& f : formats) {
    if (f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
  }
}

ExperimentConfig experiment_config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }

  ExperimentConfig config;
  try {
    config.scenario_path = j.value("scenario", "");
    if (j.contains("strategies")) {
      config.strategies.clear();
      for (const auto& s : j.at("strategies")) {
        config.strategies.push_back(strategy_from_name(s.get<std::string>()));
      }
    }
    if (j.contains("seeds")) {
      config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    if (j.contains("planner")) {
      const json& jp = j.at("planner");
      config.engine.planner.lambda = jp.value("lambda", config.engine.planner.lambda);
      if (jp.contains("zeta") && !jp.at("zeta").is_null()) {
        config.engine.planner.zeta = jp.at("zeta").get<double>();
      }
      config.engine.planner.tau = jp.value("tau", config.engine.planner.tau);
      config.engine.planner.num_slots = jp.value("num_slots", config.engine.planner.num_slots);
    }
    if (j.contains("estimator")) {
      const json& je = j.at("estimator");
      config.engine.estimator.prior_weight =
          je.value("prior_weight", config.engine.estimator.prior_weight);
      config.engine.estimator.reanchor_on_shift =
          je.value("reanchor_on_shift", config.engine.estimator.reanchor_on_shift);
    }
    if (j.contains("detector")) parse_detector(j.at("detector"), config.engine.detector);
    if (j.contains("predictor")) {
      std::string p = j.at("predictor").get<std::string>();
      if (p == "oracle") {
        config.engine.predictor = PredictorKind::kOracle;
      } else if (p == "persistence") {
        config.engine.predictor = PredictorKind::kPersistence;
      } else {
        throw ConfigError("predictor must be \"oracle\" or \"persistence\"");
      }
    }
    config.out_dir = j.value("out", config.out_dir);
    if (j.contains("formats")) {
      config.formats = j.at("formats").get<std::vector<std::string>>();
    }
    config.threads = j.value("threads", 0);
  } catch (const json::exception& err) {
    throw ConfigError(std::string("config field error: ") + err.what());
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return experiment_config_from_json_string(buffer.str());
}

std::string resolved_config_json(const ExperimentConfig& config) {
  json j;
  j["scenario"] = config.scenario_path;
  json strategies = json::array();
  for (Strategy s : config.strategies) strategies.push_back(strategy_name(s));
  j["strategies"] = strategies;
  j["seeds"] = config.seeds;
  j["planner"] = {{"lambda", config.engine.planner.lambda},
                  {"zeta", config.engine.planner.zeta ? json(*config.engine.planner.zeta)
                                                      : json(nullptr)},
                  {"tau", config.engine.planner.tau},
                  {"num_slots", config.engine.planner.num_slots}};
  j["estimator"] = {{"prior_weight", config.engine.estimator.prior_weight},
                    {"reanchor_on_shift", config.engine.estimator.reanchor_on_shift}};
  json jd;
  jd["q_policy"] = config.engine.detector.fixed_q ? json(*config.engine.detector.fixed_q)
                                                  : json("dkw");
  switch (config.engine.detector.aggregator.mode) {
    case AggregatorConfig::Mode::kAll:
      jd["aggregator"] = "all";
      break;
    case AggregatorConfig::Mode::kAny:
      jd["aggregator"] = "any";
      break;
    case AggregatorConfig::Mode::kFraction:
      jd["aggregator"] = {{"fraction", config.engine.detector.aggregator.fraction}};
      break;
  }
  jd["distance"] = config.engine.detector.distance == DistanceForm::kCdf ? "cdf" : "pmf";
  jd["source"] = config.engine.detector.compare_block ? "block" : "estimator";
  j["detector"] = jd;
  j["predictor"] =
      config.engine.predictor == PredictorKind::kOracle ? "oracle" : "persistence";
  j["out"] = config.out_dir;
  j["formats"] = config.formats;
  j["threads"] = config.threads;
  return j.dump();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dots = item.find("..");
    try {
      if (dots != std::string::npos) {
        std::uint64_t lo = std::stoull(item.substr(0, dots));
        std::uint64_t hi = std::stoull(item.substr(dots + 2));
        if (hi < lo) throw ConfigError("seed range is reversed: " + item);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      } else {
        seeds.push_back(std::stoull(item));
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad seed '" + item + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError("seed out of range '" + item + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

}  // namespace tampa
