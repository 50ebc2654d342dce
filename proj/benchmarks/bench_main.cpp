#include <benchmark/benchmark.h>

#include "tampa/engine.hpp"
#include "tampa/planner.hpp"
#include "tampa/scenario.hpp"

namespace {

using namespace tampa;

const Scenario& flatbush() {
  static Scenario scenario = load_scenario(std::string(TAMPA_DATA_DIR) + "/flatbush12.json");
  return scenario;
}

EngineConfig experiment_config() {
  EngineConfig config;
  config.estimator.prior_weight = 2000;
  config.detector.aggregator.mode = AggregatorConfig::Mode::kFraction;
  config.detector.aggregator.fraction = 0.25;
  return config;
}

void bench_shortest_path(benchmark::State& state) {
  const Scenario& scenario = flatbush();
  EdgeTimes times;
  for (const Edge& e : scenario.graph.edges()) times[e] = scenario.mtt.at(e);
  for (auto _ : state) {
    auto path = shortest_path(scenario.graph, times, 1, 10);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(bench_shortest_path);

void bench_estimator_update(benchmark::State& state) {
  EmpiricalEstimator est(ComplaintPmf::uniform(0, 30), 50);
  int obs = 0;
  for (auto _ : state) {
    est.observe(obs);
    obs = (obs + 7) % 31;
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(bench_estimator_update);

void bench_solve_window(benchmark::State& state) {
  const Scenario& scenario = flatbush();
  int slots = static_cast<int>(state.range(0));
  std::vector<EdgeTimes> slot_times(slots);
  EdgeMap<ComplaintPmf> pmfs;
  for (const Edge& e : scenario.graph.edges()) {
    for (int k = 0; k < slots; ++k) slot_times[k][e] = scenario.mtt.at(e);
    pmfs.emplace(e, scenario.prior_for(e));
  }
  for (auto _ : state) {
    WindowMdp mdp(scenario.graph, scenario.start_node, slot_times, pmfs, 0.5,
                  scenario.graph.median_edge_length(), 8);
    Plan plan = mdp.solve();
    benchmark::DoNotOptimize(plan);
  }
}
BENCHMARK(bench_solve_window)->Arg(3)->Arg(6);

void bench_full_run(benchmark::State& state) {
  Scenario scenario = flatbush();
  scenario.horizon = 200;
  scenario.complaints.shifts.clear();
  EngineConfig config = experiment_config();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RunResult result = run_tampa(scenario, config, seed++);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(bench_full_run)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
