#pragma once

#include "zonesim/allocator.hpp"
#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zonesim::verify {

// Exhaustive reference solver over all Z-subsets of the N elements (N <= 20).
// Chunk mode enforces exactly G elements per LUN, falling back to the
// unconstrained set only when relaxation is allowed and strict selection is
// infeasible. Throws ZnsError(Infeasible).
AllocationResult oracle_solve(const AllocationRequest& req);

// A self-contained allocator instance (the request spans `elements`).
struct Instance {
  std::vector<StorageElement> elements;
  AllocationRequest request;

  Instance() = default;
  Instance(const Instance& other);
  Instance& operator=(const Instance& other);

  std::string dump() const;
};

enum class InstanceMode { ChunkStrict, ChunkRelaxed, Stripe };

std::string_view to_string(InstanceMode m);

// Random instance with N <= max_elements. Wears are drawn from a small range
// so ties are common.
Instance random_instance(InstanceMode mode, std::uint64_t seed, std::uint32_t max_elements = 16);

using Solver = std::function<AllocationResult(const AllocationRequest&)>;

// A deliberately wrong solver (never reuses FreeInvalid elements) used to
// check that the harness detects bugs.
AllocationResult mutant_solve(const AllocationRequest& req);

struct CheckReport {
  std::uint64_t checked = 0;
  std::uint64_t feasible = 0;
  std::optional<std::string> counterexample;
  bool ok() const { return !counterexample.has_value(); }
};

// Compares `solver` against the oracle on `count` instances per mode.
CheckReport check_allocator(std::uint64_t count, std::uint64_t seed, const Solver& solver);

// Enumerates every (state, event) pair against the reference edge table.
CheckReport check_state_machine();

// Random command sequences against a fresh device, checking element-count
// conservation, mapping bijectivity, the open-zone cap, write-pointer
// monotonicity and the FINISH group-boundary rule after every command.
CheckReport check_invariants(const DeviceGeometry& geom, const StrategyConfig& strategy,
                             std::uint64_t commands, std::uint64_t seed);

}  // namespace zonesim::verify
