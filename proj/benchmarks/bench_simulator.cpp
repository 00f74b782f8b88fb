#include <benchmark/benchmark.h>

#include "spatial/scenario.hpp"
#include "spatial/simulator.hpp"

namespace {

using namespace spatial;

void BM_RunCondition2(benchmark::State& state) {
  const Scenario s = load_scenario(std::string(SPATIAL_SCENARIO_DIR) + "/condition2.json");
  RunOptions o;
  o.mode = state.range(0) == 1 ? Mode::L1 : Mode::L2;
  for (auto _ : state) benchmark::DoNotOptimize(run(s, o).trace.size());
}
BENCHMARK(BM_RunCondition2)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
