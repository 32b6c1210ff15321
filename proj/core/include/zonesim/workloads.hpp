#pragma once

#include "zonesim/device.hpp"
#include "zonesim/geometry.hpp"
#include "zonesim/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zonesim {

class TraceSink;

// ---------------------------------------------------------------------------
// fio-style raw device jobs

enum class FioPattern { SeqWrite, SeqRead, RandRead };

std::string_view to_string(FioPattern p);
FioPattern parse_fio_pattern(std::string_view name);

struct FioJobSpec {
  FioPattern pattern = FioPattern::SeqWrite;
  std::uint32_t request_pages = 1;
  ZoneId zone = 0;
  std::uint64_t op_count = 0;
  std::uint64_t seed = 0;  // rand_read offsets
  Micros start{0};
};

struct FioJobResult {
  std::vector<Micros> latencies;
  std::uint64_t pages = 0;
  Micros first_submit{0};
  Micros finished{0};
  double throughput = 0.0;  // pages/s
};

struct FioReport {
  std::vector<FioJobResult> jobs;
  Micros makespan{0};
  double aggregate_throughput = 0.0;  // pages/s
};

FioReport run_fio(std::span<const FioJobSpec> jobs, Device& device);

// ---------------------------------------------------------------------------
// Occupancy sweep: fill one zone, then FINISH it.

struct OccupancyResult {
  std::uint64_t host_pages = 0;
  std::uint64_t dummy_pages = 0;
  std::uint32_t elements_released = 0;
  double dlwa = 0.0;
};

// Host pages written = round(occupancy * zone_pages).
OccupancyResult run_occupancy(double occupancy, Device& device, ZoneId zone = 0);

// ---------------------------------------------------------------------------
// Interference bench: N writer jobs, N zones pre-filled to `fill_fraction`.
// Phase 1 runs the writers alone; phase 2 runs them while a finisher job
// issues FINISH on the pre-filled zones.

struct InterferenceSpec {
  std::uint32_t jobs = 1;
  double fill_fraction = 0.4;
  std::uint64_t writer_pages = 0;  // per writer; 0 = one zone
  std::uint64_t seed = 0;
};

struct InterferenceReport {
  double base_throughput = 0.0;       // pages/s
  double contended_throughput = 0.0;  // pages/s
  double factor = 1.0;
  std::uint64_t dummy_pages = 0;
  Micros base_makespan{0};
  Micros contended_makespan{0};
  std::uint64_t host_pages = 0;  // fill + both writer phases
  Micros end_time{0};
};

InterferenceReport run_interference_bench(const InterferenceSpec& spec,
                                          const DeviceGeometry& geom,
                                          const StrategyConfig& strategy,
                                          TraceSink* trace = nullptr);

// ---------------------------------------------------------------------------
// Key-value mix on a lifetime-hinted zoned file system model.

struct LifetimeClass {
  std::string name;
  std::uint64_t file_pages = 0;  // sealed file size
  double lifetime_ops = 0.0;     // mean ops until the file is deleted
  double weight = 0.0;           // share of inserted data
};

struct ZenfsLiteConfig {
  std::uint32_t finish_threshold = 0;  // T in percent, 0..99
  std::vector<LifetimeClass> lifetime_classes;
  std::uint32_t streams_per_class = 2;
  std::uint64_t rng_seed = 0;

  // Minimum occupancy (pages) at which a zone may be finished; nullopt when
  // FINISH is disallowed (T == 0).
  std::optional<std::uint64_t> finish_min_pages(std::uint64_t zone_pages) const;
};

std::vector<LifetimeClass> default_lifetime_classes();

struct KvMixSpec {
  std::uint64_t total_ops = 40'000;
  double insert = 0.50;
  double remove = 0.10;
  double point_query = 0.15;
  double update = 0.25;
  std::uint64_t value_bytes_min = 8 * 1024;
  std::uint64_t value_bytes_max = 24 * 1024;
  std::uint64_t tombstone_bytes = 64;
  std::uint64_t rng_seed = 0;
};

enum class WorkloadOutcome { Completed, OutOfSpace };

std::string_view to_string(WorkloadOutcome o);

struct ZenfsReport {
  WorkloadOutcome outcome = WorkloadOutcome::Completed;
  std::uint64_t ops_completed = 0;
  std::uint64_t host_pages = 0;
  std::uint64_t dummy_pages = 0;
  std::uint64_t dummy_bytes = 0;
  std::uint64_t finishes = 0;
  std::uint64_t resets = 0;
  std::uint64_t relaxed_placements = 0;
  double dlwa = 1.0;
  SpaceAmplification sa;
  WearStats wear;
  Micros makespan{0};
};

// Host model outline:
//  * inserts/updates append values to one of `streams_per_class` active files
//    of a lifetime class; deletes append a tombstone to the shortest class;
//    point queries read a page of a random live file.
//  * a sealed file is deleted after an exponentially distributed lifetime.
//  * each active file writes into a zone owned by it. A new zone comes from
//    an idle open zone with the same lifetime class, else a fresh Empty zone;
//    at the open-zone limit the fullest idle zone meeting the FINISH
//    threshold is finished, else the idle zone of the nearest lifetime class
//    is taken (lifetime mixing).
//  * zones whose data is entirely invalidated are reset.
// The SA clock is the host operation index.
ZenfsReport run_zenfs_lite(const KvMixSpec& kv, const ZenfsLiteConfig& zf, Device& device);

// Runs the key-value mix `repeats` times on the same device, resetting every
// zone between repetitions; wear accumulates. Repetition k uses seeds + k.
ZenfsReport run_zenfs_repeated(const KvMixSpec& kv, const ZenfsLiteConfig& zf,
                               std::uint32_t repeats, Device& device);

}  // namespace zonesim
