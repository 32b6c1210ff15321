#include "zonesim/device.hpp"
#include "zonesim/geometry.hpp"
#include "zonesim/workloads.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace zonesim;

StrategyConfig strategy_for(const char* name, const DeviceGeometry& g) {
  return validate_strategy(parse_strategy_name(name), g);
}

// Full write-then-finish of one zn540 zone at the given occupancy (percent).
void occupancy_finish(benchmark::State& state, const char* strategy) {
  const DeviceGeometry g = validate_geometry(named_profile("zn540"));
  const double occ = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    Device dev(g, strategy_for(strategy, g));
    benchmark::DoNotOptimize(run_occupancy(occ, dev).dlwa);
  }
}

BENCHMARK_CAPTURE(occupancy_finish, lazy, "lazy")->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(occupancy_finish, stripe, "stripe")->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);

// The key-value mix on the desk device; reports ops per second of host time.
void zenfs_mix(benchmark::State& state, const char* strategy) {
  const DeviceGeometry g = validate_geometry(named_profile("desk"));
  KvMixSpec kv;
  kv.total_ops = static_cast<std::uint64_t>(state.range(0));
  ZenfsLiteConfig zf;
  zf.finish_threshold = 90;
  zf.lifetime_classes = default_lifetime_classes();
  for (auto _ : state) {
    Device dev(g, strategy_for(strategy, g));
    benchmark::DoNotOptimize(run_zenfs_lite(kv, zf, dev).dummy_pages);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(zenfs_mix, lazy, "lazy")->Arg(10'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(zenfs_mix, stripe, "stripe")->Arg(10'000)->Unit(benchmark::kMillisecond);

void interference(benchmark::State& state, const char* strategy) {
  const DeviceGeometry g = validate_geometry(named_profile("zn540"));
  InterferenceSpec spec;
  spec.jobs = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_interference_bench(spec, g, strategy_for(strategy, g)).factor);
  }
}

BENCHMARK_CAPTURE(interference, lazy, "lazy")->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(interference, chunk_2, "chunk-2")->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
