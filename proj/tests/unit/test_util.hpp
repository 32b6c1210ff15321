#pragma once

#include "zonesim/geometry.hpp"

#include <string_view>

namespace zonesim::test {

inline DeviceGeometry geom(std::string_view profile) { return validate_geometry(named_profile(profile)); }

inline StrategyConfig strat(std::string_view name, const DeviceGeometry& g) {
  return validate_strategy(parse_strategy_name(name), g);
}

}  // namespace zonesim::test
