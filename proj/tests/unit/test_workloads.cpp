#include "zonesim/device.hpp"
#include "zonesim/errors.hpp"
#include "zonesim/trace.hpp"
#include "zonesim/workloads.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace zonesim;

TEST(Fio, SeqWriteFillsZone) {
  const DeviceGeometry g = test::geom("g-small");
  Device dev(g, test::strat("stripe", g));
  FioJobSpec spec;
  spec.zone = 1;
  const auto r = run_fio({&spec, 1}, dev);
  ASSERT_EQ(r.jobs.size(), 1u);
  EXPECT_EQ(r.jobs[0].latencies.size(), 32u);
  EXPECT_EQ(r.jobs[0].pages, 32u);
  EXPECT_EQ(dev.zones.zone(1).write_pointer, 32u);
  EXPECT_EQ(dev.zones.zone(1).state, ZoneState::Full);
  for (Micros l : r.jobs[0].latencies) EXPECT_EQ(l, Micros{700});
}

TEST(Fio, RandReadOnEmptyZoneFails) {
  const DeviceGeometry g = test::geom("g-small");
  Device dev(g, test::strat("stripe", g));
  FioJobSpec spec;
  spec.pattern = FioPattern::RandRead;
  spec.op_count = 5;
  try {
    run_fio({&spec, 1}, dev);
    FAIL() << "expected an error";
  } catch (const JobError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReadBeyondWritePointer);
  }
}

TEST(Fio, ReadsAfterFill) {
  const DeviceGeometry g = test::geom("g-small");
  Device dev(g, test::strat("stripe", g));
  dev.sim.issue({CmdKind::Append, 0, 0, 20});
  FioJobSpec seq;
  seq.pattern = FioPattern::SeqRead;
  seq.op_count = 20;
  FioJobSpec rnd = seq;
  rnd.pattern = FioPattern::RandRead;
  rnd.seed = 9;
  for (const FioJobSpec& s : {seq, rnd}) {
    const auto r = run_fio({&s, 1}, dev);
    EXPECT_EQ(r.jobs[0].latencies.size(), 20u);
    EXPECT_GT(r.jobs[0].throughput, 0.0);
  }
}

TEST(Fio, FourWritersScaleWithLuns) {
  const DeviceGeometry g = test::geom("desk");
  auto aggregate = [&](std::uint32_t n) {
    Device dev(g, test::strat("stripe", g));
    std::vector<FioJobSpec> specs(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      specs[j].zone = j;
      specs[j].op_count = 400;
    }
    return run_fio(specs, dev).aggregate_throughput;
  };
  const double one = aggregate(1);
  const double four = aggregate(4);
  EXPECT_NEAR(one, 1e6 / 700.0, 1e-6);
  EXPECT_GT(four / one, 3.8);
  EXPECT_LE(four / one, 4.0 + 1e-9);
}

TEST(Fio, PatternNames) {
  for (auto p : {FioPattern::SeqWrite, FioPattern::SeqRead, FioPattern::RandRead}) {
    EXPECT_EQ(parse_fio_pattern(to_string(p)), p);
  }
  EXPECT_THROW(parse_fio_pattern("randwrite"), ZnsError);
}

TEST(Occupancy, Zn540PageCounts) {
  const DeviceGeometry g = test::geom("zn540");
  Device dev(g, test::strat("lazy", g));
  const auto r = run_occupancy(0.10, dev);
  EXPECT_EQ(r.host_pages, 6758u);  // round(0.1 * 67584)
  EXPECT_EQ(r.dummy_pages, 67584u - 6758u);
  EXPECT_THROW(run_occupancy(1.5, dev, 1), ZnsError);
}

TEST(Interference, StripeNearOne) {
  const DeviceGeometry g = test::geom("zn540");
  InterferenceSpec spec;
  spec.jobs = 5;
  spec.seed = 1;
  const auto r = run_interference_bench(spec, g, test::strat("stripe", g));
  EXPECT_GE(r.factor, 0.99);
  EXPECT_LE(r.factor, 1.05);
  const auto lazy = run_interference_bench(spec, g, test::strat("lazy", g));
  EXPECT_GT(lazy.factor, r.factor);
  EXPECT_GT(lazy.dummy_pages, r.dummy_pages);
}

TEST(Interference, NoDummyNoInterference) {
  // A 50% fill sits on a stripe group boundary: FINISH writes nothing.
  const DeviceGeometry g = test::geom("zn540");
  InterferenceSpec spec;
  spec.jobs = 3;
  spec.fill_fraction = 0.5;
  spec.seed = 4;
  const auto r = run_interference_bench(spec, g, test::strat("stripe", g));
  EXPECT_EQ(r.dummy_pages, 0u);
  EXPECT_NEAR(r.factor, 1.0, 0.01);
}

TEST(Interference, Preconditions) {
  const DeviceGeometry g = test::geom("g-small");
  InterferenceSpec spec;
  spec.jobs = 2;
  EXPECT_THROW(run_interference_bench(spec, g, test::strat("stripe", g)), ZnsError);
  spec.jobs = 0;
  EXPECT_THROW(run_interference_bench(spec, g, test::strat("stripe", g)), ZnsError);
}

TEST(Interference, PhaseRecords) {
  const DeviceGeometry g = test::geom("zn540");
  std::ostringstream out;
  JsonlTraceWriter trace(out);
  trace.set_host_io(false);
  InterferenceSpec spec;
  spec.jobs = 2;
  spec.writer_pages = 300;
  run_interference_bench(spec, g, test::strat("chunk-2", g), &trace);
  const std::string s = out.str();
  EXPECT_NE(s.find("\"name\":\"base\""), std::string::npos);
  EXPECT_NE(s.find("\"name\":\"contended\""), std::string::npos);
}

namespace {

ZenfsReport zenfs(const char* profile, const char* strategy, std::uint32_t t, std::uint64_t seed,
                  std::uint64_t ops = 40'000) {
  const DeviceGeometry g = test::geom(profile);
  Device dev(g, test::strat(strategy, g));
  KvMixSpec kv;
  kv.total_ops = ops;
  kv.rng_seed = seed;
  ZenfsLiteConfig zf;
  zf.finish_threshold = t;
  zf.lifetime_classes = default_lifetime_classes();
  zf.rng_seed = seed;
  return run_zenfs_lite(kv, zf, dev);
}

}  // namespace

TEST(ZenfsLite, FinishMinPages) {
  ZenfsLiteConfig zf;
  EXPECT_EQ(zf.finish_min_pages(1408), std::nullopt);
  zf.finish_threshold = 90;
  EXPECT_EQ(zf.finish_min_pages(1000), 100u);
  zf.finish_threshold = 99;
  EXPECT_EQ(zf.finish_min_pages(1408), 15u);  // ceil(14.08)
}

TEST(ZenfsLite, DefaultMixSumsToOne) {
  KvMixSpec kv;
  EXPECT_DOUBLE_EQ(kv.insert + kv.remove + kv.point_query + kv.update, 1.0);
  double w = 0;
  for (const auto& c : default_lifetime_classes()) w += c.weight;
  EXPECT_NEAR(w, 1.0, 1e-12);
}

TEST(ZenfsLite, ThresholdZeroNeverFinishes) {
  const auto r = zenfs("desk", "lazy", 0, 1, 10'000);
  EXPECT_EQ(r.finishes, 0u);
  EXPECT_EQ(r.dummy_pages, 0u);
  EXPECT_EQ(r.outcome, WorkloadOutcome::Completed);
  EXPECT_GT(r.resets, 0u);
}

TEST(ZenfsLite, Deterministic) {
  const auto a = zenfs("desk", "stripe", 50, 3, 8'000);
  const auto b = zenfs("desk", "stripe", 50, 3, 8'000);
  EXPECT_EQ(a.host_pages, b.host_pages);
  EXPECT_EQ(a.dummy_pages, b.dummy_pages);
  EXPECT_EQ(a.sa.avg_bytes, b.sa.avg_bytes);
  EXPECT_EQ(a.makespan, b.makespan);
}

TEST(ZenfsLite, SaIndependentOfStrategy) {
  for (std::uint32_t t : {10u, 90u}) {
    const auto lazy = zenfs("desk", "lazy", t, 2, 10'000);
    const auto stripe = zenfs("desk", "stripe", t, 2, 10'000);
    EXPECT_EQ(lazy.host_pages, stripe.host_pages);
    EXPECT_DOUBLE_EQ(lazy.sa.avg_bytes, stripe.sa.avg_bytes);
  }
}

TEST(ZenfsLite, DummyGapAtNinety) {
  const auto lazy = zenfs("desk", "lazy", 90, 1);
  const auto stripe = zenfs("desk", "stripe", 90, 1);
  EXPECT_GT(stripe.dummy_bytes, 0u);
  EXPECT_GE(lazy.dummy_bytes, 10 * stripe.dummy_bytes);
}

TEST(ZenfsLite, BaselineOutOfSpaceAtNinetyNine) {
  const auto r = zenfs("desk-tight", "lazy", 99, 1);
  EXPECT_EQ(r.outcome, WorkloadOutcome::OutOfSpace);
  EXPECT_LT(r.ops_completed, 40'000u);
}

TEST(ZenfsLite, RepeatedAccumulatesWear) {
  const DeviceGeometry g = test::geom("desk");
  Device dev(g, test::strat("stripe", g));
  KvMixSpec kv;
  kv.total_ops = 5'000;
  ZenfsLiteConfig zf;
  zf.finish_threshold = 90;
  zf.lifetime_classes = default_lifetime_classes();
  const auto r = run_zenfs_repeated(kv, zf, 3, dev);
  EXPECT_GT(r.wear.mean, 0.0);
  EXPECT_EQ(r.outcome, WorkloadOutcome::Completed);
  EXPECT_EQ(r.ops_completed, 15'000u);
}
