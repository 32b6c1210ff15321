#include "zonesim/allocator.hpp"
#include "zonesim/errors.hpp"
#include "zonesim/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

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

struct Fixture {
  std::vector<StorageElement> elements;
  AllocationRequest req;

  // Chunk elements: wears[l] lists LUN l's chunks in id order.
  static Fixture chunks(const std::vector<std::vector<std::uint32_t>>& wears, std::uint32_t z,
                        bool relaxed = false) {
    Fixture f;
    for (LunId l = 0; l < wears.size(); ++l) {
      for (std::uint32_t w : wears[l]) {
        StorageElement e;
        e.id = static_cast<ElementId>(f.elements.size());
        e.lun = l;
        e.wear = w;
        f.elements.push_back(e);
      }
    }
    f.req.strategy = {StrategyKind::Chunk, 1, relaxed};
    f.req.luns = static_cast<std::uint32_t>(wears.size());
    f.req.zone_elements = z;
    f.req.elements = f.elements;
    return f;
  }

  static Fixture stripes(const std::vector<std::uint32_t>& wears, std::uint32_t z) {
    Fixture f;
    for (std::uint32_t w : wears) {
      StorageElement e;
      e.id = static_cast<ElementId>(f.elements.size());
      e.lun = kAllLuns;
      e.wear = w;
      f.elements.push_back(e);
    }
    f.req.strategy = {StrategyKind::Stripe, 1, false};
    f.req.luns = 4;
    f.req.zone_elements = z;
    f.req.elements = f.elements;
    return f;
  }

  Fixture(const Fixture& o) : elements(o.elements), req(o.req) { req.elements = elements; }
  Fixture() = default;
};

// Brute force over every subset: minimal total wear among selections of
// exactly Z allocatable elements (with `per_lun` per LUN when set).
std::optional<std::uint64_t> brute_force(const Fixture& f, std::optional<std::uint32_t> per_lun) {
  const std::size_t n = f.elements.size();
  std::optional<std::uint64_t> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != f.req.zone_elements) continue;
    std::uint64_t sum = 0;
    std::vector<std::uint32_t> count(f.req.luns, 0);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& e = f.elements[i];
      ok = is_allocatable(e.avail);
      sum += e.wear;
      if (e.lun != kAllLuns) ++count[e.lun];
    }
    if (ok && per_lun) ok = std::all_of(count.begin(), count.end(), [&](auto c) { return c == *per_lun; });
    if (ok && (!best || sum < *best)) best = sum;
  }
  return best;
}

}  // namespace

TEST(AllocateChunks, PerLunLowestWearWithIdTies) {
  Fixture f = Fixture::chunks({{2, 0, 1}, {1, 1, 3}}, 2);
  const auto r = allocate_chunks(f.req);
  EXPECT_EQ(r.element_ids, (std::vector<ElementId>{1, 3}));
  EXPECT_EQ(r.objective_value, 1u);
  EXPECT_EQ(brute_force(f, 1), 1u);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0], (std::vector<ElementId>{1, 3}));
}

TEST(AllocateChunks, AllEqualWearTakesLowestIds) {
  Fixture f = Fixture::chunks({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, 8);
  const auto r = allocate_chunks(f.req);
  EXPECT_EQ(r.element_ids, (std::vector<ElementId>{0, 3, 6, 9, 1, 4, 7, 10}));
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0], (std::vector<ElementId>{0, 3, 6, 9}));
  EXPECT_EQ(r.groups[1], (std::vector<ElementId>{1, 4, 7, 10}));
}

TEST(AllocateChunks, StrictInsufficientAvailability) {
  Fixture f = Fixture::chunks({{0, 0}, {0, 0}}, 4);
  f.elements[1].avail = Availability::AllocatedValid;
  EXPECT_EQ(code_of([&] { allocate_chunks(f.req); }), ErrorCode::InsufficientAvailability);
  EXPECT_EQ(code_of([&] { verify::oracle_solve(f.req); }), ErrorCode::Infeasible);
}

TEST(AllocateChunks, RelaxedFallsBackToDeviceWide) {
  Fixture f = Fixture::chunks({{5, 0, 0}, {1, 1, 1}}, 4, true);
  f.elements[1].avail = Availability::AllocatedValid;
  f.elements[2].avail = Availability::AllocatedValid;
  const auto r = allocate_chunks(f.req);
  EXPECT_TRUE(r.relaxed);
  EXPECT_EQ(r.objective_value, *brute_force(f, std::nullopt));
  EXPECT_EQ(r.element_ids.size(), 4u);
}

TEST(AllocateChunks, RelaxedPrefersStrictWhenFeasible) {
  Fixture f = Fixture::chunks({{9, 9}, {0, 0}}, 2, true);
  const auto r = allocate_chunks(f.req);
  EXPECT_FALSE(r.relaxed);
  EXPECT_EQ(r.objective_value, 9u);
}

TEST(AllocateChunks, FreeInvalidIsSelectable) {
  Fixture f = Fixture::chunks({{3, 0}}, 1);
  f.elements[1].avail = Availability::FreeInvalid;
  EXPECT_EQ(allocate_chunks(f.req).element_ids, (std::vector<ElementId>{1}));
}

TEST(AllocateStripes, LowestWear) {
  Fixture f = Fixture::stripes({3, 1, 2, 0, 5, 1, 2, 0}, 2);
  const auto r = allocate_stripes(f.req);
  EXPECT_EQ(r.element_ids, (std::vector<ElementId>{3, 7}));
  EXPECT_EQ(r.objective_value, 0u);
  EXPECT_EQ(brute_force(f, std::nullopt), 0u);
  EXPECT_EQ(r.groups.size(), 2u);
}

TEST(AllocateStripes, FiltersUnavailable) {
  Fixture f = Fixture::stripes({9, 0, 0, 0, 0, 0, 0, 9}, 2);
  for (int i = 1; i <= 6; ++i) f.elements[i].avail = Availability::AllocatedValid;
  EXPECT_EQ(allocate_stripes(f.req).element_ids, (std::vector<ElementId>{0, 7}));
}

TEST(AllocateStripes, TooFew) {
  Fixture f = Fixture::stripes({0, 0, 0}, 3);
  f.elements[0].avail = Availability::AllocatedEmpty;
  EXPECT_EQ(code_of([&] { allocate_stripes(f.req); }), ErrorCode::InsufficientAvailability);
}

TEST(AllocateBaseline, DirectIsIdentity) {
  Fixture f = Fixture::stripes(std::vector<std::uint32_t>(10, 0), 1);
  f.req.strategy = {StrategyKind::Direct, 1, false};
  f.req.zone_id = 7;
  EXPECT_EQ(allocate_baseline(f.req).element_ids, (std::vector<ElementId>{7}));
  f.elements[7].avail = Availability::AllocatedValid;
  EXPECT_EQ(code_of([&] { allocate_baseline(f.req); }), ErrorCode::DirectZoneBusy);
}

TEST(AllocateBaseline, LazyIsFifoOverFreeList) {
  Fixture f = Fixture::stripes(std::vector<std::uint32_t>(5, 0), 1);
  f.req.strategy = {StrategyKind::Lazy, 1, false};
  for (auto& e : f.elements) e.avail = Availability::AllocatedValid;
  // Element 3 freed before element 1; wear is ignored.
  f.elements[3].avail = Availability::FreeInvalid;
  f.elements[3].free_stamp = 10;
  f.elements[3].wear = 50;
  f.elements[1].avail = Availability::FreeInvalid;
  f.elements[1].free_stamp = 11;
  EXPECT_EQ(allocate_baseline(f.req).element_ids, (std::vector<ElementId>{3}));
  f.elements[3].avail = Availability::AllocatedValid;
  f.elements[1].avail = Availability::AllocatedValid;
  EXPECT_EQ(code_of([&] { allocate_baseline(f.req); }), ErrorCode::NoFreePhysicalZone);
}

TEST(Oracle, SingleLunExample) {
  Fixture f = Fixture::chunks({{4, 1, 3, 1, 9}}, 2);
  EXPECT_EQ(verify::oracle_solve(f.req).objective_value, 2u);
  EXPECT_EQ(brute_force(f, 2), 2u);
  EXPECT_EQ(allocate_chunks(f.req).objective_value, 2u);
}

TEST(Oracle, InfeasibleStripe) {
  Fixture f = Fixture::stripes({1, 1}, 3);
  EXPECT_EQ(code_of([&] { verify::oracle_solve(f.req); }), ErrorCode::Infeasible);
}

TEST(Oracle, AgreesWithTestBruteForce) {
  for (auto mode : {verify::InstanceMode::ChunkStrict, verify::InstanceMode::ChunkRelaxed,
                    verify::InstanceMode::Stripe}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      verify::Instance inst = verify::random_instance(mode, seed, 14);
      Fixture f;
      f.elements = inst.elements;
      f.req = inst.request;
      f.req.elements = f.elements;
      std::optional<std::uint64_t> expect;
      if (mode == verify::InstanceMode::Stripe) {
        expect = brute_force(f, std::nullopt);
      } else {
        expect = brute_force(f, f.req.per_lun());
        if (!expect && mode == verify::InstanceMode::ChunkRelaxed) expect = brute_force(f, std::nullopt);
      }
      std::optional<std::uint64_t> got;
      try {
        got = verify::oracle_solve(f.req).objective_value;
      } catch (const ZnsError& e) {
        EXPECT_EQ(e.code(), ErrorCode::Infeasible);
      }
      EXPECT_EQ(got, expect) << inst.dump();
    }
  }
}

TEST(Allocator, MatchesOracleOnRandomInstances) {
  const auto r = verify::check_allocator(400, 11, allocate);
  EXPECT_TRUE(r.ok()) << *r.counterexample;
  EXPECT_EQ(r.checked, 1200u);
  EXPECT_GT(r.feasible, 300u);
}

TEST(Allocator, HarnessCatchesMutant) {
  const auto r = verify::check_allocator(400, 11, verify::mutant_solve);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.counterexample->find("element"), std::string::npos);
}

TEST(Allocator, ResultsSatisfyConstraints) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    verify::Instance inst = verify::random_instance(verify::InstanceMode::ChunkStrict, seed);
    try {
      const auto r = allocate(inst.request);
      EXPECT_TRUE(satisfies_constraints(inst.request, r)) << inst.dump();
      EXPECT_EQ(r.element_ids.size(), inst.request.zone_elements);
    } catch (const ZnsError& e) {
      EXPECT_EQ(e.code(), ErrorCode::InsufficientAvailability);
    }
  }
}

TEST(Allocator, Deterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    verify::Instance inst = verify::random_instance(verify::InstanceMode::Stripe, seed);
    try {
      EXPECT_EQ(allocate(inst.request).element_ids, allocate(inst.request).element_ids);
    } catch (const ZnsError&) {
    }
  }
}
