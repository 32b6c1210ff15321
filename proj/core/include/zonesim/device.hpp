#pragma once

#include "zonesim/geometry.hpp"
#include "zonesim/metrics.hpp"
#include "zonesim/sim_engine.hpp"
#include "zonesim/zone_manager.hpp"

namespace zonesim {

class TraceSink;

// A simulated device: zone manager, metrics ledger and event engine wired
// together. Not copyable or movable (the engine holds references).
class Device {
 public:
  Device(const DeviceGeometry& geom, const StrategyConfig& strategy,
         TraceSink* trace = nullptr);
  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  const DeviceGeometry& geometry() const { return zones.geometry(); }
  const StrategyConfig& strategy() const { return zones.strategy(); }

  ZoneManager zones;
  MetricsLedger ledger;
  Simulator sim;
};

}  // namespace zonesim
