#include "zonesim/device.hpp"

namespace zonesim {

Device::Device(const DeviceGeometry& geom, const StrategyConfig& strategy, TraceSink* trace)
    : zones(geom, strategy), ledger(), sim(zones, ledger, trace) {}

}  // namespace zonesim
