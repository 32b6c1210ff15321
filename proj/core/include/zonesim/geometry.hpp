#pragma once

#include "zonesim/config.hpp"

#include <chrono>
#include <cstdint>
#include <string>

namespace zonesim {

using Micros = std::chrono::microseconds;

using ZoneId = std::uint32_t;
using ElementId = std::uint32_t;
using BlockId = std::uint32_t;
using LunId = std::uint32_t;

// Physical layout and timing of the modeled device. Construct through
// validate_geometry(); a DeviceGeometry obtained that way satisfies
//   blocks_per_zone == blocks_per_lun_per_zone * luns_total
//   zones_total * blocks_per_zone <= total_blocks()
//   1 <= max_open_zones <= zones_total
struct DeviceGeometry {
  std::uint32_t channels = 0;
  std::uint32_t luns_per_channel = 0;
  std::uint32_t luns_total = 0;               // L
  std::uint32_t pages_per_block = 0;          // P
  std::uint64_t page_size = 0;                // bytes
  std::uint32_t blocks_per_zone = 0;
  std::uint32_t blocks_per_lun_per_zone = 0;  // E
  std::uint32_t blocks_per_lun = 0;           // physical blocks in each LUN
  std::uint32_t zones_total = 0;
  std::uint32_t max_open_zones = 0;
  Micros t_prog{0};
  Micros t_read{0};
  Micros t_erase{0};
  Micros t_alloc{0};
  Micros t_xfer{0};  // per-page channel transfer, 0 disables the stage

  std::uint32_t total_blocks() const { return blocks_per_lun * luns_total; }
  std::uint64_t zone_pages() const {
    return std::uint64_t{blocks_per_zone} * pages_per_block;
  }
  std::uint64_t zone_bytes() const { return zone_pages() * page_size; }
  // Host-visible capacity (all zones).
  std::uint64_t capacity_bytes() const { return zone_bytes() * zones_total; }
  LunId lun_of_block(BlockId block) const { return block / blocks_per_lun; }

  friend bool operator==(const DeviceGeometry&, const DeviceGeometry&) = default;
};

enum class StrategyKind { Direct, Lazy, Chunk, Stripe };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::Stripe;
  std::uint32_t chunk_size = 1;  // c_s, chunk only
  bool parallelism_relaxed = false;

  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

bool is_full_zone(StrategyKind kind);

// "direct", "lazy", "stripe", "chunk-<c_s>"; a "-relaxed" suffix sets
// parallelism_relaxed for chunk strategies.
std::string strategy_name(const StrategyConfig& cfg);
StrategyConfig parse_strategy_name(std::string_view name);

DeviceGeometry validate_geometry(const ConfigDocument& raw);
StrategyConfig validate_strategy(const StrategyConfig& cfg, const DeviceGeometry& geom);
StrategyConfig strategy_from_config(const ConfigDocument& raw);

// Inverse of validate_geometry for the [device] section.
void write_geometry(const DeviceGeometry& geom, ConfigDocument& doc);

// Storage elements that make up one zone (Z).
std::uint32_t elements_per_zone(const StrategyConfig& cfg, const DeviceGeometry& geom);

// Built-in device profiles.
ConfigDocument zn540_profile();
ConfigDocument g_small_profile();
// 16-page blocks, 48 zones, 10 open: the zenfs-lite desk device.
ConfigDocument desk_profile();
// desk with 28 zones and 9 open (capacity-constrained variant).
ConfigDocument desk_tight_profile();
// "zn540", "g-small", "desk", "desk-tight".
ConfigDocument named_profile(std::string_view name);

// validate_geometry() after overlaying the document's [device] keys on
// device.profile when one is named.
DeviceGeometry geometry_from_config(const ConfigDocument& raw);

}  // namespace zonesim
