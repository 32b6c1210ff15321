#pragma once

#include "zonesim/allocator.hpp"
#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace zonesim {

enum class ZoneState : std::uint8_t { Empty, Open, Full };

std::string_view to_string(ZoneState s);

// One LUN-lane of a group: `blocks` consecutive member blocks of `element`
// starting at member index `first_member`.
struct Lane {
  ElementId element = 0;
  std::uint32_t first_member = 0;
  std::uint32_t blocks = 1;
};

struct ZoneDescriptor {
  ZoneId zone_id = 0;
  ZoneState state = ZoneState::Empty;
  std::uint64_t write_pointer = 0;  // pages
  std::vector<std::vector<Lane>> mapping;  // groups, each with L lanes
};

// zone -> allocation plus the reverse element -> zone index.
class MappingTable {
 public:
  void bind(ZoneId zone, const AllocationResult& result);
  void unbind_element(ElementId element);
  void unbind_zone(ZoneId zone);

  std::optional<ZoneId> zone_of(ElementId element) const;
  const std::vector<ElementId>* elements_of(ZoneId zone) const;
  std::size_t mapped_elements() const { return element_to_zone_.size(); }

  // Forward and reverse indexes agree and no element is in two zones.
  bool bijective() const;

 private:
  std::unordered_map<ZoneId, std::vector<ElementId>> zone_to_elements_;
  std::unordered_map<ElementId, ZoneId> element_to_zone_;
};

struct PageLocation {
  ElementId element = 0;
  std::uint32_t member = 0;  // member block index inside the element
  std::uint32_t page = 0;
};

struct WriteOutcome {
  std::uint64_t start_lba = 0;
  std::optional<AllocationResult> allocation;  // set on the zone's first write
  std::vector<FlashOp> erases;    // erase-before-reuse of FreeInvalid elements
  std::vector<FlashOp> programs;  // host pages, in LBA order
};

struct ReadOutcome {
  std::vector<FlashOp> reads;
  std::uint64_t zero_filled_pages = 0;  // released regions of finished zones
};

struct FinishReport {
  std::uint64_t dummy_pages_written = 0;
  std::uint32_t elements_released = 0;
  std::vector<FlashOp> dummy_ops;  // in fill order
};

struct ResetReport {
  std::uint32_t elements_invalidated = 0;
  std::uint32_t elements_released = 0;
  std::uint64_t pages_discarded = 0;  // write pointer before the reset
};

// Zone lifecycle, LBA translation and the mapping table for one device.
class ZoneManager {
 public:
  ZoneManager(const DeviceGeometry& geom, const StrategyConfig& strategy);

  const DeviceGeometry& geometry() const { return geom_; }
  const StrategyConfig& strategy() const { return strategy_; }
  const FlashState& flash() const { return flash_; }
  FlashState& flash_for_preconditioning() { return flash_; }
  const MappingTable& mapping() const { return table_; }

  const ZoneDescriptor& zone(ZoneId id) const;
  std::uint32_t open_zones() const { return open_zones_; }
  std::uint64_t group_pages() const { return group_pages_; }

  WriteOutcome zone_write(ZoneId zone, std::uint64_t start_lba, std::uint64_t pages);
  WriteOutcome zone_append(ZoneId zone, std::uint64_t pages);
  ReadOutcome zone_read(ZoneId zone, std::uint64_t start_lba, std::uint64_t pages) const;
  FinishReport finish_zone(ZoneId zone);
  ResetReport reset_zone(ZoneId zone);

  // Zone-relative page -> physical location. Requires the page's group to be
  // mapped.
  PageLocation translate(const ZoneDescriptor& zone, std::uint64_t page) const;

 private:
  ZoneDescriptor& mut(ZoneId id);
  std::vector<std::vector<Lane>> lanes_for(const AllocationResult& result) const;
  FlashOp program(const ZoneDescriptor& zone, std::uint64_t page);

  DeviceGeometry geom_;
  StrategyConfig strategy_;
  FlashState flash_;
  MappingTable table_;
  std::vector<ZoneDescriptor> zones_;
  std::uint32_t open_zones_ = 0;
  std::uint64_t group_pages_ = 0;
  std::uint64_t lane_pages_ = 0;
};

}  // namespace zonesim
