#include "zonesim/allocator.hpp"

#include "zonesim/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <string>

namespace zonesim {

namespace {

bool wear_order(const StorageElement* a, const StorageElement* b) {
  return a->wear != b->wear ? a->wear < b->wear : a->id < b->id;
}

// The `count` lowest-wear allocatable elements of `pool`, in (wear, id) order.
std::vector<const StorageElement*> lowest_wear(std::vector<const StorageElement*> pool,
                                               std::size_t count) {
  if (pool.size() > count) {
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count), pool.end(),
                      wear_order);
    pool.resize(count);
  } else {
    std::sort(pool.begin(), pool.end(), wear_order);
  }
  return pool;
}

std::uint64_t wear_sum(const std::vector<ElementId>& ids, std::span<const StorageElement> all) {
  std::uint64_t sum = 0;
  for (ElementId id : ids) sum += all[id].wear;
  return sum;
}

[[noreturn]] void insufficient(const std::string& what) {
  throw ZnsError(ErrorCode::InsufficientAvailability, what);
}

}  // namespace

AllocationRequest make_request(ZoneId zone, const StrategyConfig& strategy,
                               const FlashState& state) {
  AllocationRequest req;
  req.zone_id = zone;
  req.strategy = strategy;
  req.luns = state.geometry().luns_total;
  req.zone_elements = elements_per_zone(strategy, state.geometry());
  req.elements = state.elements();
  return req;
}

AllocationResult allocate_chunks(const AllocationRequest& req) {
  const std::uint32_t L = req.luns;
  const std::uint32_t Z = req.zone_elements;
  const std::uint32_t G = req.per_lun();

  std::vector<std::vector<const StorageElement*>> per_lun(L);
  for (const auto& e : req.elements) {
    if (is_allocatable(e.avail) && e.lun < L) per_lun[e.lun].push_back(&e);
  }

  AllocationResult result;
  const bool strict_ok = Z % L == 0 && std::all_of(per_lun.begin(), per_lun.end(),
                                                   [&](const auto& v) { return v.size() >= G; });
  if (strict_ok) {
    std::vector<std::vector<const StorageElement*>> picked(L);
    for (LunId l = 0; l < L; ++l) picked[l] = lowest_wear(per_lun[l], G);
    for (std::uint32_t k = 0; k < G; ++k) {
      std::vector<ElementId> group;
      group.reserve(L);
      for (LunId l = 0; l < L; ++l) group.push_back(picked[l][k]->id);
      result.element_ids.insert(result.element_ids.end(), group.begin(), group.end());
      result.groups.push_back(std::move(group));
    }
    result.objective_value = wear_sum(result.element_ids, req.elements);
    return result;
  }

  if (!req.strategy.parallelism_relaxed) {
    insufficient("a LUN has fewer than " + std::to_string(G) + " allocatable chunks");
  }

  std::vector<const StorageElement*> pool;
  for (const auto& lun : per_lun) pool.insert(pool.end(), lun.begin(), lun.end());
  if (pool.size() < Z) {
    insufficient(std::to_string(pool.size()) + " allocatable chunks, zone needs " +
                 std::to_string(Z));
  }
  auto chosen = lowest_wear(std::move(pool), Z);

  // Groups take one chunk per LUN round-robin so each group spans as many
  // LUNs as the selection allows.
  std::vector<std::deque<ElementId>> queues(L);
  for (const auto* e : chosen) queues[e->lun].push_back(e->id);
  std::vector<ElementId> order;
  order.reserve(Z);
  while (order.size() < Z) {
    for (LunId l = 0; l < L; ++l) {
      if (!queues[l].empty()) {
        order.push_back(queues[l].front());
        queues[l].pop_front();
      }
    }
  }
  const std::uint32_t lanes = std::min(L, Z);
  for (std::size_t i = 0; i < order.size(); i += lanes) {
    auto end = std::min(order.size(), i + lanes);
    result.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                               order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  result.element_ids = std::move(order);
  result.objective_value = wear_sum(result.element_ids, req.elements);
  result.relaxed = true;
  return result;
}

AllocationResult allocate_stripes(const AllocationRequest& req) {
  const std::uint32_t Z = req.zone_elements;
  std::vector<const StorageElement*> pool;
  for (const auto& e : req.elements) {
    if (is_allocatable(e.avail)) pool.push_back(&e);
  }
  if (pool.size() < Z) {
    insufficient(std::to_string(pool.size()) + " allocatable stripes, zone needs " +
                 std::to_string(Z));
  }
  AllocationResult result;
  for (const auto* e : lowest_wear(std::move(pool), Z)) {
    result.element_ids.push_back(e->id);
    result.groups.push_back({e->id});
  }
  result.objective_value = wear_sum(result.element_ids, req.elements);
  return result;
}

AllocationResult allocate_baseline(const AllocationRequest& req) {
  const StorageElement* chosen = nullptr;
  if (req.strategy.kind == StrategyKind::Direct) {
    if (req.zone_id >= req.elements.size()) {
      throw ZnsError(ErrorCode::NoFreePhysicalZone,
                     "no physical zone " + std::to_string(req.zone_id));
    }
    chosen = &req.elements[req.zone_id];
    if (!is_allocatable(chosen->avail)) {
      throw ZnsError(ErrorCode::DirectZoneBusy,
                     "physical zone " + std::to_string(req.zone_id) + " is " +
                         std::string(to_string(chosen->avail)));
    }
  } else {
    for (const auto& e : req.elements) {
      if (is_allocatable(e.avail) && (chosen == nullptr || e.free_stamp < chosen->free_stamp)) {
        chosen = &e;
      }
    }
    if (chosen == nullptr) throw ZnsError(ErrorCode::NoFreePhysicalZone, "free list empty");
  }
  AllocationResult result;
  result.element_ids = {chosen->id};
  result.groups = {{chosen->id}};
  result.objective_value = chosen->wear;
  return result;
}

AllocationResult allocate(const AllocationRequest& req) {
  switch (req.strategy.kind) {
    case StrategyKind::Chunk: return allocate_chunks(req);
    case StrategyKind::Stripe: return allocate_stripes(req);
    case StrategyKind::Direct:
    case StrategyKind::Lazy: return allocate_baseline(req);
  }
  throw ZnsError(ErrorCode::InvalidArgument, "unknown strategy");
}

bool satisfies_constraints(const AllocationRequest& req, const AllocationResult& result) {
  if (result.element_ids.size() != req.zone_elements) return false;
  std::set<ElementId> seen;
  std::vector<std::uint32_t> per_lun(req.luns, 0);
  std::uint64_t sum = 0;
  for (ElementId id : result.element_ids) {
    if (id >= req.elements.size() || !seen.insert(id).second) return false;
    const auto& e = req.elements[id];
    if (!is_allocatable(e.avail)) return false;
    sum += e.wear;
    if (e.lun < req.luns) ++per_lun[e.lun];
  }
  if (sum != result.objective_value) return false;
  if (req.strategy.kind == StrategyKind::Chunk && !result.relaxed) {
    for (auto n : per_lun) {
      if (n != req.per_lun()) return false;
    }
  }
  return true;
}

}  // namespace zonesim
