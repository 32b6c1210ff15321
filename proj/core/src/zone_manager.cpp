#include "zonesim/zone_manager.hpp"

#include "zonesim/errors.hpp"

#include <algorithm>
#include <string>

namespace zonesim {

std::string_view to_string(ZoneState s) {
  switch (s) {
    case ZoneState::Empty: return "empty";
    case ZoneState::Open: return "open";
    case ZoneState::Full: return "full";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MappingTable

void MappingTable::bind(ZoneId zone, const AllocationResult& result) {
  for (ElementId id : result.element_ids) {
    auto [it, inserted] = element_to_zone_.emplace(id, zone);
    if (!inserted) {
      throw ZnsError(ErrorCode::IllegalTransition,
                     "element " + std::to_string(id) + " already mapped to zone " +
                         std::to_string(it->second));
    }
  }
  auto& ids = zone_to_elements_[zone];
  ids.insert(ids.end(), result.element_ids.begin(), result.element_ids.end());
}

void MappingTable::unbind_element(ElementId element) {
  auto it = element_to_zone_.find(element);
  if (it == element_to_zone_.end()) return;
  auto zit = zone_to_elements_.find(it->second);
  if (zit != zone_to_elements_.end()) {
    auto& ids = zit->second;
    ids.erase(std::remove(ids.begin(), ids.end(), element), ids.end());
    if (ids.empty()) zone_to_elements_.erase(zit);
  }
  element_to_zone_.erase(it);
}

void MappingTable::unbind_zone(ZoneId zone) {
  auto zit = zone_to_elements_.find(zone);
  if (zit == zone_to_elements_.end()) return;
  for (ElementId id : zit->second) element_to_zone_.erase(id);
  zone_to_elements_.erase(zit);
}

std::optional<ZoneId> MappingTable::zone_of(ElementId element) const {
  auto it = element_to_zone_.find(element);
  if (it == element_to_zone_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ElementId>* MappingTable::elements_of(ZoneId zone) const {
  auto it = zone_to_elements_.find(zone);
  return it == zone_to_elements_.end() ? nullptr : &it->second;
}

bool MappingTable::bijective() const {
  std::size_t forward = 0;
  for (const auto& [zone, ids] : zone_to_elements_) {
    forward += ids.size();
    for (ElementId id : ids) {
      auto it = element_to_zone_.find(id);
      if (it == element_to_zone_.end() || it->second != zone) return false;
    }
  }
  return forward == element_to_zone_.size();
}

// ---------------------------------------------------------------------------
// ZoneManager

ZoneManager::ZoneManager(const DeviceGeometry& geom, const StrategyConfig& strategy)
    : geom_(geom), strategy_(validate_strategy(strategy, geom)), flash_(geom, strategy_) {
  zones_.resize(geom.zones_total);
  for (ZoneId z = 0; z < geom.zones_total; ++z) zones_[z].zone_id = z;
  std::uint32_t lane_blocks = 1;
  switch (strategy_.kind) {
    case StrategyKind::Chunk: lane_blocks = strategy_.chunk_size; break;
    case StrategyKind::Stripe: lane_blocks = 1; break;
    case StrategyKind::Direct:
    case StrategyKind::Lazy: lane_blocks = geom.blocks_per_lun_per_zone; break;
  }
  lane_pages_ = std::uint64_t{lane_blocks} * geom.pages_per_block;
  group_pages_ = lane_pages_ * geom.luns_total;
}

const ZoneDescriptor& ZoneManager::zone(ZoneId id) const {
  if (id >= zones_.size()) {
    throw ZnsError(ErrorCode::InvalidArgument, "zone " + std::to_string(id) + " out of range");
  }
  return zones_[id];
}

ZoneDescriptor& ZoneManager::mut(ZoneId id) { return const_cast<ZoneDescriptor&>(zone(id)); }

std::vector<std::vector<Lane>> ZoneManager::lanes_for(const AllocationResult& result) const {
  const std::uint32_t L = geom_.luns_total;
  std::vector<std::vector<Lane>> groups;
  groups.reserve(result.groups.size());
  for (const auto& group : result.groups) {
    std::vector<Lane> lanes;
    lanes.reserve(L);
    switch (strategy_.kind) {
      case StrategyKind::Chunk:
        for (ElementId id : group) lanes.push_back({id, 0, strategy_.chunk_size});
        break;
      case StrategyKind::Stripe:
        for (std::uint32_t l = 0; l < L; ++l) lanes.push_back({group.front(), l, 1});
        break;
      case StrategyKind::Direct:
      case StrategyKind::Lazy: {
        const std::uint32_t E = geom_.blocks_per_lun_per_zone;
        for (std::uint32_t l = 0; l < L; ++l) lanes.push_back({group.front(), l * E, E});
        break;
      }
    }
    groups.push_back(std::move(lanes));
  }
  return groups;
}

PageLocation ZoneManager::translate(const ZoneDescriptor& z, std::uint64_t page) const {
  const std::uint64_t g = page / group_pages_;
  if (g >= z.mapping.size()) {
    throw ZnsError(ErrorCode::ReadUnmappedZone,
                   "zone " + std::to_string(z.zone_id) + " page " + std::to_string(page) +
                       " has no mapped group");
  }
  const auto& lanes = z.mapping[g];
  const std::uint64_t r = page % group_pages_;
  const std::uint64_t lane = r % lanes.size();
  const std::uint64_t in_lane = r / lanes.size();
  const Lane& ln = lanes[lane];
  PageLocation loc;
  loc.element = ln.element;
  loc.member = ln.first_member + static_cast<std::uint32_t>(in_lane / geom_.pages_per_block);
  loc.page = static_cast<std::uint32_t>(in_lane % geom_.pages_per_block);
  return loc;
}

FlashOp ZoneManager::program(const ZoneDescriptor& z, std::uint64_t page) {
  const PageLocation loc = translate(z, page);
  return flash_.program_page(loc.element, loc.member, loc.page);
}

WriteOutcome ZoneManager::zone_write(ZoneId id, std::uint64_t start_lba, std::uint64_t pages) {
  ZoneDescriptor& z = mut(id);
  if (pages == 0) throw ZnsError(ErrorCode::InvalidArgument, "empty write");
  if (z.state == ZoneState::Full) {
    throw ZnsError(ErrorCode::ZoneFull, "zone " + std::to_string(id) + " is full");
  }
  if (start_lba != z.write_pointer) {
    throw ZnsError(ErrorCode::WritePointerViolation,
                   "zone " + std::to_string(id) + " write at " + std::to_string(start_lba) +
                       ", write pointer " + std::to_string(z.write_pointer));
  }
  if (z.write_pointer + pages > geom_.zone_pages()) {
    throw ZnsError(ErrorCode::ZoneFull, "write of " + std::to_string(pages) +
                                            " pages overruns zone " + std::to_string(id));
  }

  WriteOutcome out;
  out.start_lba = start_lba;
  if (z.state == ZoneState::Empty) {
    if (open_zones_ >= geom_.max_open_zones) {
      throw ZnsError(ErrorCode::OpenZoneLimitExceeded,
                     std::to_string(open_zones_) + " zones already open");
    }
    AllocationResult result = allocate(make_request(id, strategy_, flash_));
    for (ElementId e : result.element_ids) {
      auto erases = flash_.allocate(e);
      out.erases.insert(out.erases.end(), erases.begin(), erases.end());
    }
    table_.bind(id, result);
    z.mapping = lanes_for(result);
    z.state = ZoneState::Open;
    ++open_zones_;
    out.allocation = std::move(result);
  }

  out.programs.reserve(pages);
  for (std::uint64_t p = z.write_pointer; p < z.write_pointer + pages; ++p) {
    out.programs.push_back(program(z, p));
  }
  z.write_pointer += pages;
  if (z.write_pointer == geom_.zone_pages()) {
    z.state = ZoneState::Full;
    --open_zones_;
  }
  return out;
}

WriteOutcome ZoneManager::zone_append(ZoneId id, std::uint64_t pages) {
  const ZoneDescriptor& z = zone(id);
  if (z.state == ZoneState::Full) {
    throw ZnsError(ErrorCode::ZoneFull, "zone " + std::to_string(id) + " is full");
  }
  return zone_write(id, z.write_pointer, pages);
}

ReadOutcome ZoneManager::zone_read(ZoneId id, std::uint64_t start_lba,
                                   std::uint64_t pages) const {
  const ZoneDescriptor& z = zone(id);
  if (pages == 0) throw ZnsError(ErrorCode::InvalidArgument, "empty read");
  if (start_lba + pages > z.write_pointer) {
    throw ZnsError(ErrorCode::ReadBeyondWritePointer,
                   "zone " + std::to_string(id) + " read [" + std::to_string(start_lba) + ", " +
                       std::to_string(start_lba + pages) + ") write pointer " +
                       std::to_string(z.write_pointer));
  }
  if (z.mapping.empty()) {
    throw ZnsError(ErrorCode::ReadUnmappedZone, "zone " + std::to_string(id) + " has no mapping");
  }
  ReadOutcome out;
  for (std::uint64_t p = start_lba; p < start_lba + pages; ++p) {
    if (p / group_pages_ >= z.mapping.size()) {
      ++out.zero_filled_pages;
      continue;
    }
    const PageLocation loc = translate(z, p);
    out.reads.push_back(flash_.make_read(loc.element, loc.member, loc.page));
  }
  return out;
}

FinishReport ZoneManager::finish_zone(ZoneId id) {
  ZoneDescriptor& z = mut(id);
  FinishReport report;
  if (z.state == ZoneState::Full) return report;
  if (z.state == ZoneState::Empty) {
    z.state = ZoneState::Full;
    z.write_pointer = geom_.zone_pages();
    return report;
  }

  // Fill the partially written group to its boundary; every lane of a
  // touched group ends fully programmed.
  const std::uint64_t wp = z.write_pointer;
  const std::uint64_t fill_end = (wp + group_pages_ - 1) / group_pages_ * group_pages_;
  for (std::uint64_t p = wp; p < fill_end; ++p) report.dummy_ops.push_back(program(z, p));
  report.dummy_pages_written = fill_end - wp;

  const std::size_t kept = static_cast<std::size_t>(fill_end / group_pages_);
  for (std::size_t g = kept; g < z.mapping.size(); ++g) {
    ElementId last = ~ElementId{0};
    for (const Lane& lane : z.mapping[g]) {
      if (lane.element == last) continue;
      last = lane.element;
      flash_.release_unused(lane.element);
      table_.unbind_element(lane.element);
      ++report.elements_released;
    }
  }
  z.mapping.resize(kept);
  z.write_pointer = geom_.zone_pages();
  z.state = ZoneState::Full;
  --open_zones_;
  return report;
}

ResetReport ZoneManager::reset_zone(ZoneId id) {
  ZoneDescriptor& z = mut(id);
  ResetReport report;
  if (z.state == ZoneState::Empty) return report;
  report.pages_discarded = z.write_pointer;
  for (const auto& group : z.mapping) {
    ElementId last = ~ElementId{0};
    for (const Lane& lane : group) {
      if (lane.element == last) continue;
      last = lane.element;
      if (flash_.reset_release(lane.element)) {
        ++report.elements_invalidated;
      } else {
        ++report.elements_released;
      }
    }
  }
  table_.unbind_zone(id);
  if (z.state == ZoneState::Open) --open_zones_;
  z.mapping.clear();
  z.write_pointer = 0;
  z.state = ZoneState::Empty;
  return report;
}

}  // namespace zonesim
