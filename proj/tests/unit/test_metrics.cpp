#include "zonesim/errors.hpp"
#include "zonesim/metrics.hpp"

#include <gtest/gtest.h>

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

}  // namespace

TEST(Dlwa, Examples) {
  EXPECT_DOUBLE_EQ(dlwa(100, 0), 1.0);
  EXPECT_DOUBLE_EQ(dlwa(8, 8), 2.0);
  // full-zone finish at 10%: 0.1 zone of host data, 0.9 of dummy
  EXPECT_DOUBLE_EQ(dlwa(10, 90), 10.0);
  EXPECT_EQ(code_of([] { dlwa(0, 5); }), ErrorCode::NoHostWrites);
}

TEST(Dlwa, FromLedger) {
  MetricsLedger l;
  l.add_host_pages(30);
  l.add_device_pages(10);
  EXPECT_EQ(format_ratio(dlwa(l)), "1.3333");
  EXPECT_EQ(code_of([] { dlwa(MetricsLedger{}); }), ErrorCode::NoHostWrites);
}

TEST(Dlwa, AtLeastOne) {
  for (std::uint64_t h = 1; h < 50; h += 7) {
    for (std::uint64_t d = 0; d < 50; d += 5) {
      EXPECT_GE(dlwa(h, d), 1.0);
      EXPECT_EQ(dlwa(h, d) == 1.0, d == 0);
    }
  }
}

TEST(SpaceAmplification, ConstantZero) {
  std::vector<InvalidationSample> s = {{0, 0}, {10, 0}};
  const auto sa = space_amplification(s, 1000);
  EXPECT_DOUBLE_EQ(sa.avg_bytes, 0.0);
  EXPECT_DOUBLE_EQ(sa.avg_normalized, 0.0);
}

TEST(SpaceAmplification, ConstantHalf) {
  std::vector<InvalidationSample> s = {{0, 500}, {10, 500}};
  EXPECT_DOUBLE_EQ(space_amplification(s, 1000).avg_normalized, 0.5);
}

TEST(SpaceAmplification, StepSeries) {
  std::vector<InvalidationSample> s = {{0, 0}, {5, 500}, {10, 500}};
  const auto sa = space_amplification(s, 1000);
  EXPECT_DOUBLE_EQ(sa.avg_normalized, 0.25);
  EXPECT_DOUBLE_EQ(sa.avg_bytes, 250.0);
}

TEST(SpaceAmplification, TimeWeightedIntegral) {
  // 100 for 2 units, 400 for 1 unit, 0 for 1 unit
  std::vector<InvalidationSample> s = {{0, 100}, {2, 400}, {3, 0}, {4, 0}};
  EXPECT_DOUBLE_EQ(space_amplification(s, 100).avg_bytes, (200.0 + 400.0) / 4.0);
}

TEST(SpaceAmplification, Empty) {
  EXPECT_EQ(code_of([] { space_amplification(std::vector<InvalidationSample>{}, 10); }),
            ErrorCode::EmptySeries);
  MetricsLedger l;
  EXPECT_EQ(code_of([&] { space_amplification(l, 10); }), ErrorCode::EmptySeries);
}

TEST(SpaceAmplification, LedgerSeries) {
  MetricsLedger l;
  l.record_invalidated(0, 0);
  l.record_invalidated(1, 10);
  l.record_invalidated(2, 10);
  EXPECT_DOUBLE_EQ(space_amplification(l, 20).avg_normalized, 0.25);
}

TEST(WearStats, AllOnce) {
  std::vector<std::uint32_t> w(16, 1);
  const auto s = wear_stats(w);
  EXPECT_DOUBLE_EQ(s.median, 1.0);
  EXPECT_DOUBLE_EQ(s.stddev, 0.0);
  EXPECT_EQ(s.histogram.at(1), 16u);
}

TEST(WearStats, SmallSet) {
  std::vector<std::uint32_t> w = {0, 2, 0, 2};
  const auto s = wear_stats(w);
  EXPECT_DOUBLE_EQ(s.median, 1.0);
  EXPECT_DOUBLE_EQ(s.stddev, 1.0);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_EQ(s.max, 2u);
  EXPECT_EQ(s.histogram.size(), 2u);
}

TEST(WearStats, OddMedian) {
  std::vector<std::uint32_t> w = {5, 1, 3};
  EXPECT_DOUBLE_EQ(wear_stats(w).median, 3.0);
}

TEST(Interference, Examples) {
  EXPECT_DOUBLE_EQ(interference_factor(100, 100), 1.0);
  EXPECT_DOUBLE_EQ(interference_factor(100, 62.5), 1.6);
  EXPECT_EQ(code_of([] { interference_factor(100, 0); }), ErrorCode::ZeroThroughput);
  EXPECT_EQ(code_of([] { interference_factor(0, 1); }), ErrorCode::ZeroThroughput);
}

TEST(Throughput, Windows) {
  MetricsLedger l;
  l.record_completion(Micros{50'000}, 10);
  l.record_completion(Micros{150'000}, 20);
  l.record_completion(Micros{160'000}, 20);
  const auto tp = l.throughput(Micros{100'000});
  ASSERT_EQ(tp.size(), 2u);
  EXPECT_DOUBLE_EQ(tp[0].pages_per_second, 100.0);
  EXPECT_DOUBLE_EQ(tp[1].pages_per_second, 400.0);
  const auto warm = l.throughput(Micros{100'000}, Micros{100'000});
  ASSERT_EQ(warm.size(), 1u);
  EXPECT_DOUBLE_EQ(warm[0].pages_per_second, 400.0);
}

TEST(FormatRatio, FourDecimals) {
  EXPECT_EQ(format_ratio(1.0), "1.0000");
  EXPECT_EQ(format_ratio(86.363636), "86.3636");
}
