#include "zonesim/errors.hpp"
#include "zonesim/metrics.hpp"
#include "zonesim/zone_manager.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace zonesim;

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

// Pages per group: L lanes, each lane `lane_blocks` blocks of P pages.
std::uint64_t group_pages_for(std::string_view strategy, const DeviceGeometry& g) {
  const StrategyConfig s = test::strat(strategy, g);
  switch (s.kind) {
    case StrategyKind::Stripe: return std::uint64_t{g.luns_total} * g.pages_per_block;
    case StrategyKind::Chunk: return std::uint64_t{g.luns_total} * s.chunk_size * g.pages_per_block;
    default: return g.zone_pages();
  }
}

// Dummy pages a FINISH at write pointer `wp` must issue.
std::uint64_t expected_dummy(std::string_view strategy, const DeviceGeometry& g, std::uint64_t wp) {
  if (wp == 0) return 0;
  const std::uint64_t gp = group_pages_for(strategy, g);
  return (gp - wp % gp) % gp;
}

}  // namespace

TEST(ZoneManager, GSmallStripeWriteRoundRobin) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  const WriteOutcome w = zm.zone_write(0, 0, 8);
  ASSERT_TRUE(w.allocation.has_value());
  ASSERT_EQ(w.programs.size(), 8u);
  const ElementId first = w.allocation->element_ids.at(0);
  std::map<LunId, int> per_lun;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(w.programs[i].lun, i % 4);
    EXPECT_EQ(w.programs[i].page, i / 4);
    EXPECT_EQ(w.programs[i].element, first);
    ++per_lun[w.programs[i].lun];
  }
  for (const auto& [lun, n] : per_lun) EXPECT_EQ(n, 2);
  EXPECT_EQ(zm.zone(0).write_pointer, 8u);
  EXPECT_EQ(zm.zone(0).state, ZoneState::Open);
}

TEST(ZoneManager, TranslationMatchesStripingRule) {
  const DeviceGeometry g = test::geom("desk");
  for (const char* s : {"stripe", "chunk-1", "chunk-2", "chunk-11", "lazy"}) {
    ZoneManager zm(g, test::strat(s, g));
    const std::uint64_t gp = group_pages_for(s, g);
    EXPECT_EQ(zm.group_pages(), gp) << s;
    zm.zone_write(3, 0, g.zone_pages());
    const ZoneDescriptor& z = zm.zone(3);
    std::set<std::tuple<BlockId, std::uint32_t>> used;
    for (std::uint64_t p = 0; p < g.zone_pages(); p += 7) {
      const PageLocation loc = zm.translate(z, p);
      const std::uint64_t in_group = p % gp;
      const std::uint64_t lane = in_group % g.luns_total;
      const std::uint64_t lane_page = in_group / g.luns_total;
      const StorageElement& e = zm.flash().element(loc.element);
      const BlockId block = e.block_ids.at(loc.member);
      EXPECT_EQ(g.lun_of_block(block), lane) << s << " p=" << p;
      EXPECT_EQ(loc.page, lane_page % g.pages_per_block) << s << " p=" << p;
      EXPECT_TRUE(used.insert({block, loc.page}).second) << s << " p=" << p;
    }
  }
}

TEST(ZoneManager, WritePointerViolation) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_write(0, 0, 4);
  EXPECT_EQ(code_of([&] { zm.zone_write(0, 5, 1); }), ErrorCode::WritePointerViolation);
  EXPECT_EQ(code_of([&] { zm.zone_write(1, 2, 1); }), ErrorCode::WritePointerViolation);
  EXPECT_EQ(zm.zone(1).state, ZoneState::Empty);
}

TEST(ZoneManager, OpenZoneLimit) {
  const DeviceGeometry g = test::geom("zn540");
  ZoneManager zm(g, test::strat("stripe", g));
  for (ZoneId z = 0; z < 14; ++z) zm.zone_write(z, 0, 1);
  EXPECT_EQ(zm.open_zones(), 14u);
  EXPECT_EQ(code_of([&] { zm.zone_write(14, 0, 1); }), ErrorCode::OpenZoneLimitExceeded);
  EXPECT_EQ(zm.zone(14).state, ZoneState::Empty);
  zm.finish_zone(0);
  EXPECT_NO_THROW(zm.zone_write(14, 0, 1));
}

TEST(ZoneManager, AppendAssignsWritePointer) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_append(0, 8);
  const WriteOutcome a = zm.zone_append(0, 4);
  EXPECT_EQ(a.start_lba, 8u);
  EXPECT_EQ(zm.zone(0).write_pointer, 12u);
  const auto b = zm.zone_append(0, 2);
  const auto c = zm.zone_append(0, 2);
  EXPECT_EQ(b.start_lba + 2, c.start_lba);
  zm.zone_append(0, 32 - 16);
  EXPECT_EQ(zm.zone(0).state, ZoneState::Full);
  EXPECT_EQ(code_of([&] { zm.zone_append(0, 1); }), ErrorCode::ZoneFull);
  EXPECT_EQ(zm.open_zones(), 0u);
}

TEST(ZoneManager, OverlongWriteRejected) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  EXPECT_THROW(zm.zone_write(0, 0, 33), ZnsError);
  EXPECT_EQ(zm.zone(0).write_pointer, 0u);
}

TEST(ZoneManager, Reads) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  EXPECT_EQ(code_of([&] { zm.zone_read(0, 0, 1); }), ErrorCode::ReadBeyondWritePointer);
  zm.zone_write(0, 0, 8);
  const ReadOutcome r = zm.zone_read(0, 0, 4);
  ASSERT_EQ(r.reads.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.reads[i].duration, Micros{60});
    EXPECT_EQ(r.reads[i].lun, i);
  }
  EXPECT_EQ(code_of([&] { zm.zone_read(0, 8, 1); }), ErrorCode::ReadBeyondWritePointer);
  zm.finish_zone(0);
  EXPECT_EQ(zm.zone_read(0, 0, 8).reads.size(), 8u);
  // The released stripe reads back as zeros.
  const ReadOutcome tail = zm.zone_read(0, 16, 16);
  EXPECT_EQ(tail.zero_filled_pages, 16u);
  EXPECT_TRUE(tail.reads.empty());
}

TEST(ZoneManager, FinishGSmallStripe) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_write(0, 0, 8);
  const FinishReport f = zm.finish_zone(0);
  EXPECT_EQ(f.dummy_pages_written, 8u);
  EXPECT_EQ(f.elements_released, 1u);
  EXPECT_DOUBLE_EQ(dlwa(8, f.dummy_pages_written), 2.0);
  EXPECT_EQ(zm.zone(0).state, ZoneState::Full);
  EXPECT_EQ(zm.zone(0).write_pointer, 32u);
  EXPECT_EQ(zm.open_zones(), 0u);
  EXPECT_EQ(zm.flash().counts()[Availability::Free], zm.flash().element_count() - 1);
}

TEST(ZoneManager, FinishGSmallBaseline) {
  const DeviceGeometry g = test::geom("g-small");
  for (const char* s : {"direct", "lazy"}) {
    ZoneManager zm(g, test::strat(s, g));
    zm.zone_write(0, 0, 8);
    const FinishReport f = zm.finish_zone(0);
    EXPECT_EQ(f.dummy_pages_written, 24u);
    EXPECT_DOUBLE_EQ(dlwa(8, f.dummy_pages_written), 4.0);
  }
}

TEST(ZoneManager, FinishZn540StripeHalf) {
  const DeviceGeometry g = test::geom("zn540");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_write(0, 0, g.zone_pages() / 2);
  EXPECT_EQ(zm.finish_zone(0).dummy_pages_written, 0u);
}

TEST(ZoneManager, FinishEmptyAndFull) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  const FinishReport f = zm.finish_zone(2);
  EXPECT_EQ(f.dummy_pages_written, 0u);
  EXPECT_EQ(zm.zone(2).state, ZoneState::Full);
  EXPECT_EQ(zm.mapping().elements_of(2), nullptr);
  const FinishReport again = zm.finish_zone(2);
  EXPECT_EQ(again.dummy_pages_written, 0u);
  // Nothing was ever mapped, so there is nothing to read back.
  EXPECT_EQ(code_of([&] { zm.zone_read(2, 0, 4); }), ErrorCode::ReadUnmappedZone);
}

TEST(ZoneManager, FinishFillsToGroupBoundaryEveryOccupancy) {
  const DeviceGeometry g = test::geom("desk");
  for (const char* s : {"stripe", "chunk-1", "chunk-2", "chunk-11", "chunk-22", "lazy", "direct"}) {
    for (std::uint64_t wp : {1ull, 3ull, 63ull, 64ull, 65ull, 700ull, 1407ull, 1408ull}) {
      ZoneManager zm(g, test::strat(s, g));
      zm.zone_write(0, 0, wp);
      const FinishReport f = zm.finish_zone(0);
      EXPECT_EQ(f.dummy_pages_written, expected_dummy(s, g, wp)) << s << " wp=" << wp;
      // every element still mapped is fully programmed
      for (ElementId id : *zm.mapping().elements_of(0)) {
        for (std::uint32_t p : zm.flash().element(id).programmed_pages) {
          EXPECT_EQ(p, g.pages_per_block) << s << " wp=" << wp;
        }
      }
    }
  }
}

TEST(ZoneManager, DummyTouchesOnlyWrittenGroups) {
  const DeviceGeometry g = test::geom("desk");
  ZoneManager zm(g, test::strat("chunk-2", g));
  zm.zone_write(0, 0, 130);  // group 0 (128 pages) + 2 pages of group 1
  std::set<ElementId> written;
  for (ElementId id : *zm.mapping().elements_of(0)) {
    if (zm.flash().element(id).avail == Availability::AllocatedValid) written.insert(id);
  }
  const FinishReport f = zm.finish_zone(0);
  for (const auto& op : f.dummy_ops) {
    EXPECT_TRUE(written.count(op.element) || zm.flash().element(op.element).avail == Availability::AllocatedValid);
  }
  // Group 1's four lanes are filled, including the two lanes without host data.
  EXPECT_EQ(f.dummy_pages_written, 126u);
  EXPECT_EQ(zm.mapping().elements_of(0)->size(), 8u);
}

TEST(ZoneManager, ResetFullStripeZone) {
  const DeviceGeometry g = test::geom("zn540");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_write(0, 0, g.zone_pages());
  const ResetReport r = zm.reset_zone(0);
  EXPECT_EQ(r.elements_invalidated, 22u);
  EXPECT_EQ(r.elements_released, 0u);
  EXPECT_EQ(zm.zone(0).state, ZoneState::Empty);
  EXPECT_EQ(zm.zone(0).write_pointer, 0u);
  EXPECT_EQ(zm.flash().counts()[Availability::FreeInvalid], 22u);
}

TEST(ZoneManager, ResetOpenZoneReleasesUnwritten) {
  const DeviceGeometry g = test::geom("zn540");
  ZoneManager zm(g, test::strat("stripe", g));
  zm.zone_write(0, 0, 2 * 4 * 768 - 5);  // two stripes touched
  const ResetReport r = zm.reset_zone(0);
  EXPECT_EQ(r.elements_invalidated, 2u);
  EXPECT_EQ(r.elements_released, 20u);
  EXPECT_EQ(zm.open_zones(), 0u);
  EXPECT_EQ(zm.mapping().mapped_elements(), 0u);
}

TEST(ZoneManager, ResetEmptyIsNoop) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  const ResetReport r = zm.reset_zone(1);
  EXPECT_EQ(r.elements_invalidated + r.elements_released, 0u);
  EXPECT_EQ(zm.zone(1).state, ZoneState::Empty);
}

TEST(ZoneManager, RewriteAfterResetRemapsByWear) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("stripe", g));
  const auto first = zm.zone_write(0, 0, 32).allocation->element_ids;
  zm.reset_zone(0);
  // Equal wear: the same invalid stripes are reused and erased first.
  const WriteOutcome again = zm.zone_write(0, 0, 1);
  EXPECT_EQ(again.allocation->element_ids, first);
  EXPECT_EQ(again.erases.size(), 2u * g.luns_total);
  zm.reset_zone(0);
  // Now they carry wear 1 and fresh stripes win.
  const WriteOutcome third = zm.zone_write(0, 0, 1);
  const auto ids = third.allocation->element_ids;
  std::set<ElementId> a(first.begin(), first.end()), b(ids.begin(), ids.end());
  for (ElementId id : b) EXPECT_EQ(a.count(id), 0u);
  EXPECT_TRUE(third.erases.empty());
}

TEST(ZoneManager, DirectReuseErasesBeforeProgram) {
  const DeviceGeometry g = test::geom("g-small");
  ZoneManager zm(g, test::strat("direct", g));
  zm.zone_write(1, 0, 4);
  zm.reset_zone(1);
  const WriteOutcome w = zm.zone_write(1, 0, 4);
  EXPECT_EQ(w.allocation->element_ids, (std::vector<ElementId>{1}));
  EXPECT_EQ(w.erases.size(), 8u);
  EXPECT_EQ(zm.flash().element(1).wear, 1u);
}

// W_d ordering for identical host traces, along the divisibility chain of
// group sizes.
TEST(ZoneManager, DominanceAlongDivisibility) {
  const DeviceGeometry g = test::geom("zn540");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> wp_dist(1, g.zone_pages());
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t wp = wp_dist(rng);
    std::map<std::string, std::uint64_t> d;
    for (const char* s : {"stripe", "chunk-1", "chunk-2", "chunk-11", "chunk-22", "lazy", "direct"}) {
      ZoneManager zm(g, test::strat(s, g));
      zm.zone_write(0, 0, wp);
      d[s] = zm.finish_zone(0).dummy_pages_written;
    }
    EXPECT_EQ(d["stripe"], d["chunk-1"]) << wp;
    EXPECT_LE(d["chunk-1"], d["chunk-2"]) << wp;
    EXPECT_LE(d["chunk-2"], d["chunk-22"]) << wp;
    EXPECT_LE(d["chunk-1"], d["chunk-11"]) << wp;
    EXPECT_LE(d["chunk-11"], d["chunk-22"]) << wp;
    EXPECT_LE(d["chunk-22"], d["lazy"]) << wp;
    EXPECT_EQ(d["lazy"], d["direct"]) << wp;
  }
}

// chunk-2 and chunk-11 are not ordered: 2 does not divide 11.
TEST(ZoneManager, Chunk2AndChunk11AreIncomparable) {
  const DeviceGeometry g = test::geom("zn540");
  auto dummy = [&](const char* s, std::uint64_t wp) {
    ZoneManager zm(g, test::strat(s, g));
    zm.zone_write(0, 0, wp);
    return zm.finish_zone(0).dummy_pages_written;
  };
  const std::uint64_t half = g.zone_pages() / 2;
  EXPECT_LT(dummy("chunk-11", half), dummy("chunk-2", half));
  const std::uint64_t small = g.zone_pages() / 10;
  EXPECT_GT(dummy("chunk-11", small), dummy("chunk-2", small));
}
