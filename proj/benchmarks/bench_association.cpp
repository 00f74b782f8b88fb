#include <benchmark/benchmark.h>

#include <vector>

#include "spatial/association.hpp"
#include "spatial/instances.hpp"
#include "spatial/scenario.hpp"
#include "spatial/sensor.hpp"

namespace {

using namespace spatial;

void BM_FlowSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<EnergyModel> models;
  for (std::uint64_t s = 0; s < 32; ++s) models.push_back(build_energy(random_instance(s, n)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(models[i++ % models.size()]).total_energy);
  }
}
BENCHMARK(BM_FlowSolve)->Arg(8)->Arg(32)->Arg(128);

void BM_BruteForce(benchmark::State& state) {
  const auto model = build_energy(random_instance(5, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_map(model).total_energy);
}
BENCHMARK(BM_BruteForce)->Arg(6)->Arg(8);

// Full online pass over the sensor stream of a bundled scenario.
void BM_OnlineCondition1(benchmark::State& state) {
  const Scenario s = load_scenario(std::string(SPATIAL_SCENARIO_DIR) + "/condition1.json");
  std::vector<SensorFrame> frames;
  for (Tick t = 0; t < s.duration_ticks; ++t) frames.push_back(sensor_step(s, t));
  for (auto _ : state) {
    OnlineAssociator assoc;
    for (Tick t = 0; t < s.duration_ticks; ++t) {
      assoc.update(t, frames[static_cast<std::size_t>(t)].observations);
    }
    benchmark::DoNotOptimize(assoc.flush().total_energy);
  }
  state.SetItemsProcessed(state.iterations() * s.duration_ticks);
}
BENCHMARK(BM_OnlineCondition1)->Unit(benchmark::kMillisecond);

}  // namespace
