#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "spatial/scheduler.hpp"

namespace {

using namespace spatial;

// Ticks per second under a steady stream of mixed-priority arrivals.
void BM_SchedulerStream(benchmark::State& state) {
  const Mode mode = state.range(0) == 1 ? Mode::L1 : Mode::L2;
  const Tick ticks = 10000;
  const SchedulerContext ctx{true, true, Engagement::idle, nullptr};
  for (auto _ : state) {
    Scheduler s;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t delivered = 0;
    for (Tick now = 0; now < ticks; ++now) {
      if (u(rng) < 0.05) {
        TriggeredInteraction ti;
        ti.type = u(rng) < 0.5 ? ContentType::email : ContentType::news;
        ti.priority = u(rng) < 0.3 ? Priority::high : Priority::medium;
        ti.batchable = ti.type == ContentType::email;
        ti.content = "item " + std::to_string(now);
        ti.created_tick = now;
        s.enqueue(std::move(ti), now, 8);
      }
      delivered += s.tick(now, ctx, mode).delivery.has_value();
    }
    benchmark::DoNotOptimize(delivered);
  }
  state.SetItemsProcessed(state.iterations() * ticks);
}
BENCHMARK(BM_SchedulerStream)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
