#include "zonesim/errors.hpp"
#include "zonesim/geometry.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace zonesim;
using test::geom;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const ZnsError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidValue;
}

}  // namespace

TEST(Geometry, Zn540Profile) {
  const DeviceGeometry g = geom("zn540");
  EXPECT_EQ(g.luns_total, 4u);
  EXPECT_EQ(g.blocks_per_lun_per_zone, 22u);
  EXPECT_EQ(g.pages_per_block, 768u);
  EXPECT_EQ(g.page_size, 16u * 1024);
  EXPECT_EQ(g.zones_total, 48u);
  EXPECT_EQ(g.max_open_zones, 14u);
  EXPECT_EQ(g.t_prog, Micros{700});
  EXPECT_EQ(g.t_read, Micros{60});
  EXPECT_EQ(g.t_erase, Micros{3500});
  EXPECT_EQ(g.t_alloc, Micros{0});
  // 88 blocks x 768 pages x 16 KiB
  EXPECT_EQ(g.zone_bytes(), 1056ull * 1024 * 1024);
}

TEST(Geometry, GSmallProfile) {
  const DeviceGeometry g = geom("g-small");
  EXPECT_EQ(g.blocks_per_lun_per_zone, 2u);
  EXPECT_EQ(g.total_blocks(), 32u);
  EXPECT_EQ(g.zone_pages(), 32u);
}

TEST(Geometry, LunsMustDivideBlocksPerZone) {
  auto doc = zn540_profile();
  doc.set("device.channels", "3");
  doc.set("device.luns", "3");
  EXPECT_EQ(code_of([&] { validate_geometry(doc); }), ErrorCode::DivisibilityViolation);
}

TEST(Geometry, MissingField) {
  auto stripped = ConfigDocument::parse("[device]\nchannels = 4\nluns = 4\n");
  EXPECT_EQ(code_of([&] { validate_geometry(stripped); }), ErrorCode::MissingField);
}

TEST(Geometry, CapacityViolation) {
  auto doc = g_small_profile();
  doc.set("device.blocks_per_lun", "7");
  EXPECT_EQ(code_of([&] { validate_geometry(doc); }), ErrorCode::CapacityViolation);
}

TEST(Geometry, OpenLimitBounds) {
  auto doc = g_small_profile();
  doc.set("device.max_open_zones", "5");
  EXPECT_THROW(validate_geometry(doc), ZnsError);
  doc.set("device.max_open_zones", "0");
  EXPECT_THROW(validate_geometry(doc), ZnsError);
}

TEST(Geometry, LatenciesPositiveExceptAlloc) {
  auto doc = g_small_profile();
  doc.set("device.t_alloc_us", "0");
  EXPECT_NO_THROW(validate_geometry(doc));
  doc.set("device.t_prog_us", "0");
  EXPECT_THROW(validate_geometry(doc), ZnsError);
}

TEST(Geometry, ValidationIsIdempotent) {
  for (const char* p : {"zn540", "g-small", "desk", "desk-tight"}) {
    const DeviceGeometry g = geom(p);
    ConfigDocument doc;
    write_geometry(g, doc);
    EXPECT_EQ(validate_geometry(doc), g) << p;
  }
}

TEST(Geometry, ProfileOverlay) {
  ConfigDocument doc;
  doc.set("device.profile", "desk");
  doc.set("device.zones_total", "20");
  const DeviceGeometry g = geometry_from_config(doc);
  EXPECT_EQ(g.zones_total, 20u);
  EXPECT_EQ(g.pages_per_block, 16u);
  doc.set("device.profile", "nope");
  EXPECT_THROW(geometry_from_config(doc), ZnsError);
}

TEST(Strategy, Zn540ChunkSizes) {
  const DeviceGeometry g = geom("zn540");
  for (std::uint32_t cs = 1; cs <= 23; ++cs) {
    StrategyConfig c{StrategyKind::Chunk, cs, false};
    const bool valid = cs == 1 || cs == 2 || cs == 11 || cs == 22;
    if (valid) {
      EXPECT_NO_THROW(validate_strategy(c, g)) << cs;
    } else {
      EXPECT_EQ(code_of([&] { validate_strategy(c, g); }), ErrorCode::InvalidChunkSize) << cs;
    }
  }
}

TEST(Strategy, StripeIgnoresChunkSize) {
  const DeviceGeometry g = geom("zn540");
  EXPECT_NO_THROW(validate_strategy({StrategyKind::Stripe, 3, false}, g));
}

TEST(Strategy, NamesRoundTrip) {
  for (const char* n : {"direct", "lazy", "stripe", "chunk-1", "chunk-11", "chunk-2-relaxed"}) {
    EXPECT_EQ(strategy_name(parse_strategy_name(n)), n);
  }
  EXPECT_TRUE(parse_strategy_name("chunk-2-relaxed").parallelism_relaxed);
  EXPECT_THROW(parse_strategy_name("chunky"), ZnsError);
  EXPECT_THROW(parse_strategy_name("raid"), ZnsError);
}

TEST(Strategy, ElementsPerZone) {
  const DeviceGeometry g = geom("zn540");
  EXPECT_EQ(elements_per_zone(test::strat("stripe", g), g), 22u);
  EXPECT_EQ(elements_per_zone(test::strat("chunk-1", g), g), 88u);
  EXPECT_EQ(elements_per_zone(test::strat("chunk-2", g), g), 44u);
  EXPECT_EQ(elements_per_zone(test::strat("chunk-11", g), g), 8u);
  EXPECT_EQ(elements_per_zone(test::strat("lazy", g), g), 1u);
}

TEST(Strategy, FromConfig) {
  auto doc = ConfigDocument::parse("[strategy]\nkind = chunk\nchunk_size = 11\nparallelism_relaxed = true\n");
  const StrategyConfig c = strategy_from_config(doc);
  EXPECT_EQ(c.kind, StrategyKind::Chunk);
  EXPECT_EQ(c.chunk_size, 11u);
  EXPECT_TRUE(c.parallelism_relaxed);
}
