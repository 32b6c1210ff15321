#include "zonesim/allocator.hpp"
#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace zonesim;

// Allocation on a fresh zn540 device, one call per iteration.
void allocate_fresh(benchmark::State& state, const char* strategy) {
  const DeviceGeometry g = validate_geometry(named_profile("zn540"));
  const StrategyConfig s = validate_strategy(parse_strategy_name(strategy), g);
  FlashState flash(g, s);
  const AllocationRequest req = make_request(0, s, flash);
  for (auto _ : state) {
    AllocationResult r = allocate(req);
    benchmark::DoNotOptimize(r.element_ids.data());
  }
}

BENCHMARK_CAPTURE(allocate_fresh, lazy, "lazy");
BENCHMARK_CAPTURE(allocate_fresh, chunk_1, "chunk-1");
BENCHMARK_CAPTURE(allocate_fresh, chunk_2, "chunk-2");
BENCHMARK_CAPTURE(allocate_fresh, chunk_11, "chunk-11");
BENCHMARK_CAPTURE(allocate_fresh, stripe, "stripe");

}  // namespace
