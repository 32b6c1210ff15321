#pragma once

#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace zonesim {

// Snapshot-based input to the allocator. `elements` is indexed by element id.
struct AllocationRequest {
  ZoneId zone_id = 0;
  StrategyConfig strategy;
  std::uint32_t luns = 1;           // L
  std::uint32_t zone_elements = 1;  // Z
  std::span<const StorageElement> elements;

  // G, the per-LUN chunk count under strict parallelism.
  std::uint32_t per_lun() const { return zone_elements / luns; }
};

AllocationRequest make_request(ZoneId zone, const StrategyConfig& strategy,
                               const FlashState& state);

struct AllocationResult {
  // Element ids in LBA striping order: group 0 lanes, then group 1, ...
  std::vector<ElementId> element_ids;
  // Chunk mode: L elements per group (lane i = i-th element). Stripe and
  // full-zone modes: one element per group.
  std::vector<std::vector<ElementId>> groups;
  std::uint64_t objective_value = 0;  // sum of selected wear
  bool relaxed = false;               // parallelism constraint was dropped
};

// Per-LUN lowest-wear selection (ties by id). With parallelism_relaxed set and
// strict selection infeasible, falls back to device-wide lowest wear.
AllocationResult allocate_chunks(const AllocationRequest& req);

// Device-wide lowest-wear stripes (ties by id).
AllocationResult allocate_stripes(const AllocationRequest& req);

// direct: element == zone id. lazy: least-recently-freed allocatable element.
AllocationResult allocate_baseline(const AllocationRequest& req);

AllocationResult allocate(const AllocationRequest& req);

// Checks the availability, cardinality and (strict chunk) parallelism
// constraints of a result against the pre-allocation snapshot.
bool satisfies_constraints(const AllocationRequest& req, const AllocationResult& result);

}  // namespace zonesim
