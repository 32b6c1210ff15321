#include "zonesim/workloads.hpp"

#include "zonesim/errors.hpp"
#include "zonesim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

namespace zonesim {

std::string_view to_string(FioPattern p) {
  switch (p) {
    case FioPattern::SeqWrite: return "seq_write";
    case FioPattern::SeqRead: return "seq_read";
    case FioPattern::RandRead: return "rand_read";
  }
  return "?";
}

FioPattern parse_fio_pattern(std::string_view name) {
  for (FioPattern p : {FioPattern::SeqWrite, FioPattern::SeqRead, FioPattern::RandRead}) {
    if (to_string(p) == name) return p;
  }
  throw ZnsError(ErrorCode::InvalidValue, "unknown fio pattern '" + std::string(name) + "'");
}

std::string_view to_string(WorkloadOutcome o) {
  return o == WorkloadOutcome::Completed ? "completed" : "out_of_space";
}

namespace {

double pages_per_second(std::uint64_t pages, Micros span) {
  if (span.count() <= 0) return 0.0;
  return static_cast<double>(pages) * 1e6 / static_cast<double>(span.count());
}

// ---------------------------------------------------------------------------
// fio

class FioJob final : public Job {
 public:
  FioJob(const FioJobSpec& spec, const ZoneManager& zones) : spec_(spec), zones_(zones), rng_(spec.seed) {}

  std::optional<Command> next(Micros) override {
    const std::uint64_t zp = zones_.geometry().zone_pages();
    const ZoneDescriptor& z = zones_.zone(spec_.zone);
    if (spec_.op_count != 0 && issued_ >= spec_.op_count) return std::nullopt;
    Command c;
    c.zone = spec_.zone;
    c.pages = spec_.request_pages;
    switch (spec_.pattern) {
      case FioPattern::SeqWrite:
        if (spec_.op_count == 0 && z.write_pointer + c.pages > zp) return std::nullopt;
        c.kind = CmdKind::Append;
        break;
      case FioPattern::SeqRead:
        if (spec_.op_count == 0 && cursor_ + c.pages > z.write_pointer) return std::nullopt;
        c.kind = CmdKind::Read;
        c.lba = cursor_;
        cursor_ += c.pages;
        if (spec_.op_count != 0 && cursor_ + c.pages > z.write_pointer) cursor_ = 0;
        break;
      case FioPattern::RandRead: {
        c.kind = CmdKind::Read;
        const std::uint64_t wp = z.write_pointer;
        if (wp >= c.pages) {
          std::uniform_int_distribution<std::uint64_t> d(0, (wp - c.pages) / c.pages);
          c.lba = d(rng_) * c.pages;
        }
        break;
      }
    }
    ++issued_;
    return c;
  }

  void on_complete(const CommandResult& r) override {
    if (result.latencies.empty()) result.first_submit = r.submitted;
    result.latencies.push_back(r.completed - r.submitted);
    result.pages += r.command.pages;
    result.finished = r.completed;
  }

  Micros start() const override { return spec_.start; }

  FioJobResult result;

 private:
  FioJobSpec spec_;
  const ZoneManager& zones_;
  std::mt19937_64 rng_;
  std::uint64_t issued_ = 0;
  std::uint64_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// interference bench

class WriterJob final : public Job {
 public:
  WriterJob(ZoneId zone, std::uint64_t pages, Micros start) : zone_(zone), left_(pages), start_(start) {}
  std::optional<Command> next(Micros) override {
    if (left_ == 0) return std::nullopt;
    --left_;
    return Command{CmdKind::Append, zone_, 0, 1};
  }
  Micros start() const override { return start_; }

 private:
  ZoneId zone_;
  std::uint64_t left_;
  Micros start_;
};

class FinisherJob final : public Job {
 public:
  FinisherJob(std::vector<ZoneId> zones, Micros start) : zones_(std::move(zones)), start_(start) {}
  std::optional<Command> next(Micros) override {
    if (i_ == zones_.size()) return std::nullopt;
    return Command{CmdKind::Finish, zones_[i_++], 0, 0};
  }
  void on_complete(const CommandResult& r) override { dummy_pages += r.dummy_pages; }
  Micros start() const override { return start_; }
  std::uint64_t dummy_pages = 0;

 private:
  std::vector<ZoneId> zones_;
  std::size_t i_ = 0;
  Micros start_;
};

// ---------------------------------------------------------------------------
// zenfs-lite

struct HostZone {
  ZoneState state = ZoneState::Empty;
  std::uint64_t wp = 0;
  int cls = -1;
  std::uint32_t owners = 0;
  std::uint64_t live = 0;
  std::uint64_t invalid = 0;
};

struct Extent {
  ZoneId zone = 0;
  std::uint64_t lba = 0;
  std::uint64_t pages = 0;
};

struct HostFile {
  int cls = 0;
  std::uint64_t target_pages = 0;  // sealed once this size is reached
  std::vector<Extent> extents;
  std::uint64_t pages = 0;
  std::optional<ZoneId> zone;
  std::size_t live_slot = std::numeric_limits<std::size_t>::max();
};

struct OutOfSpace {};

class ZenfsHost {
 public:
  ZenfsHost(const KvMixSpec& kv, const ZenfsLiteConfig& zf, Device& device, double clock_offset)
      : kv_(kv),
        zf_(zf),
        dev_(device),
        geom_(device.geometry()),
        zone_pages_(geom_.zone_pages()),
        finish_min_(zf.finish_min_pages(geom_.zone_pages())),
        clock_offset_(clock_offset),
        zones_(geom_.zones_total) {
    if (zf_.lifetime_classes.empty()) {
      throw ZnsError(ErrorCode::InvalidValue, "no lifetime classes");
    }
    if (zf_.finish_threshold > 99) {
      throw ZnsError(ErrorCode::InvalidValue, "finish threshold must be in [0,99]");
    }
    const double sum = kv.insert + kv.remove + kv.point_query + kv.update;
    if (std::abs(sum - 1.0) > 1e-9) throw ZnsError(ErrorCode::InvalidValue, "op ratios must sum to 1");
    if (kv.value_bytes_min == 0 || kv.value_bytes_min > kv.value_bytes_max) {
      throw ZnsError(ErrorCode::InvalidValue, "bad value size range");
    }
    std::seed_seq seq{kv.rng_seed, zf.rng_seed};
    rng_.seed(seq);
    std::vector<double> w;
    for (const auto& c : zf_.lifetime_classes) w.push_back(c.weight);
    class_dist_ = std::discrete_distribution<int>(w.begin(), w.end());
    // Each zone mirrors the device's view; the device may have been used
    // by a previous repetition.
    for (ZoneId z = 0; z < geom_.zones_total; ++z) {
      const ZoneDescriptor& d = dev_.zones.zone(z);
      if (d.state != ZoneState::Empty) {
        throw ZnsError(ErrorCode::InvalidArgument, "zenfs-lite needs an all-empty device");
      }
    }
  }

  ZenfsReport run() {
    const std::uint64_t h0 = dev_.ledger.host_pages();
    const std::uint64_t d0 = dev_.ledger.device_pages();
    const Micros t0 = dev_.sim.now();
    ZenfsReport report;

    const std::uint32_t streams =
        static_cast<std::uint32_t>(zf_.lifetime_classes.size()) * zf_.streams_per_class;
    slots_.resize(streams);
    carry_.assign(streams, 0);
    for (std::uint32_t s = 0; s < streams; ++s) slots_[s] = new_file();

    std::discrete_distribution<int> op_dist({kv_.insert, kv_.remove, kv_.point_query, kv_.update});
    std::uniform_int_distribution<std::uint32_t> slot_dist(0, streams - 1);
    std::uniform_int_distribution<std::uint64_t> value_dist(kv_.value_bytes_min, kv_.value_bytes_max);

    sample(0);
    try {
      for (op_ = 0; op_ < kv_.total_ops; ++op_) {
        process_deaths();
        switch (op_dist(rng_)) {
          case 0:  // insert
          case 3:  // update
            append(slot_dist(rng_), value_dist(rng_));
            break;
          case 1:  // delete
            append(slot_dist(rng_), kv_.tombstone_bytes);
            break;
          case 2:
            point_query();
            break;
        }
      }
    } catch (const OutOfSpace&) {
      report.outcome = WorkloadOutcome::OutOfSpace;
    }
    report.ops_completed = op_;
    sample(static_cast<double>(op_));

    report.host_pages = dev_.ledger.host_pages() - h0;
    report.dummy_pages = dev_.ledger.device_pages() - d0;
    report.dummy_bytes = report.dummy_pages * geom_.page_size;
    report.finishes = finishes_;
    report.resets = resets_;
    report.relaxed_placements = relaxed_;
    report.dlwa = report.host_pages == 0 ? 1.0 : dlwa(report.host_pages, report.dummy_pages);
    report.sa = space_amplification(series_, geom_.capacity_bytes());
    const auto wear = dev_.zones.flash().block_wear();
    report.wear = wear_stats(wear);
    report.makespan = dev_.sim.now() - t0;
    return report;
  }

 private:
  std::size_t new_file() {
    HostFile f;
    f.cls = class_dist_(rng_);
    // Sizes vary in [size/2, 3*size/2] so files do not tile zones exactly.
    const std::uint64_t size = std::max<std::uint64_t>(zf_.lifetime_classes[f.cls].file_pages, 1);
    std::uniform_int_distribution<std::uint64_t> d((size + 1) / 2, size + size / 2);
    f.target_pages = d(rng_);
    files_.push_back(std::move(f));
    return files_.size() - 1;
  }

  Micros now() const { return dev_.sim.now(); }

  void sample(double clock) {
    series_.push_back({clock, wi_bytes_});
    dev_.ledger.record_invalidated(clock_offset_ + clock, wi_bytes_);
    if (auto* t = dev_.sim.trace()) t->invalidate(now(), clock_offset_ + clock, std::nullopt, 0, wi_bytes_);
  }

  CommandResult issue(Command c) { return dev_.sim.issue(c, now()); }

  std::uint32_t open_count() const {
    return static_cast<std::uint32_t>(std::count_if(
        zones_.begin(), zones_.end(), [](const HostZone& z) { return z.state == ZoneState::Open; }));
  }

  std::optional<ZoneId> first_empty() const {
    for (ZoneId z = 0; z < zones_.size(); ++z) {
      if (zones_[z].state == ZoneState::Empty) return z;
    }
    return std::nullopt;
  }

  // Fullest idle open zone accepted by `pred`, lowest id on ties.
  template <class Pred>
  std::optional<ZoneId> fullest_idle(Pred pred) const {
    std::optional<ZoneId> best;
    for (ZoneId z = 0; z < zones_.size(); ++z) {
      const HostZone& hz = zones_[z];
      if (hz.state != ZoneState::Open || hz.owners != 0 || !pred(hz)) continue;
      if (!best || hz.wp > zones_[*best].wp) best = z;
    }
    return best;
  }

  ZoneId take(ZoneId z, int cls) {
    HostZone& hz = zones_[z];
    if (hz.state == ZoneState::Empty) {
      hz.state = ZoneState::Open;
      hz.cls = cls;
    }
    ++hz.owners;
    return z;
  }

  ZoneId acquire(int cls) {
    if (auto z = fullest_idle([&](const HostZone& hz) { return hz.cls == cls; })) return take(*z, cls);
    const std::uint32_t open = open_count();
    auto empty = first_empty();
    if (open < geom_.max_open_zones && empty) return take(*empty, cls);
    if (open >= geom_.max_open_zones && empty && finish_min_) {
      const std::uint64_t min = *finish_min_;
      if (auto victim = fullest_idle([&](const HostZone& hz) { return hz.wp >= min; })) {
        finish(*victim);
        return take(*empty, cls);
      }
    }
    // Relax lifetime matching: nearest class, then fullest.
    std::optional<ZoneId> best;
    int best_dist = 0;
    for (ZoneId z = 0; z < zones_.size(); ++z) {
      const HostZone& hz = zones_[z];
      if (hz.state != ZoneState::Open || hz.owners != 0) continue;
      const int dist = std::abs(hz.cls - cls);
      if (!best || dist < best_dist || (dist == best_dist && hz.wp > zones_[*best].wp)) {
        best = z;
        best_dist = dist;
      }
    }
    if (!best) throw OutOfSpace{};
    ++relaxed_;
    return take(*best, cls);
  }

  void finish(ZoneId z) {
    issue({CmdKind::Finish, z, 0, 0});
    ++finishes_;
    HostZone& hz = zones_[z];
    hz.state = ZoneState::Full;
    hz.wp = zone_pages_;
    try_reset(z);
  }

  void release(HostFile& f) {
    if (!f.zone) return;
    HostZone& hz = zones_[*f.zone];
    --hz.owners;
    const ZoneId z = *f.zone;
    f.zone.reset();
    try_reset(z);
  }

  void try_reset(ZoneId z) {
    HostZone& hz = zones_[z];
    if (hz.state == ZoneState::Empty || hz.owners != 0 || hz.live != 0) return;
    issue({CmdKind::Reset, z, 0, 0});
    ++resets_;
    wi_bytes_ -= hz.invalid * geom_.page_size;
    if (auto* t = dev_.sim.trace()) {
      t->invalidate(now(), clock_offset_ + static_cast<double>(op_), z, 0, wi_bytes_);
    }
    hz = HostZone{};
    sample(static_cast<double>(op_));
  }

  void write_pages(std::size_t fi, std::uint64_t n) {
    while (n > 0) {
      if (!files_[fi].zone) files_[fi].zone = acquire(files_[fi].cls);
      HostFile& f = files_[fi];
      const ZoneId z = *f.zone;
      HostZone& hz = zones_[z];
      const std::uint64_t k = std::min(n, zone_pages_ - hz.wp);
      const CommandResult r = issue({CmdKind::Append, z, 0, k});
      if (!f.extents.empty() && f.extents.back().zone == z &&
          f.extents.back().lba + f.extents.back().pages == r.start_lba) {
        f.extents.back().pages += k;
      } else {
        f.extents.push_back({z, r.start_lba, k});
      }
      if (f.live_slot == std::numeric_limits<std::size_t>::max()) {
        f.live_slot = live_.size();
        live_.push_back(fi);
      }
      hz.wp += k;
      hz.live += k;
      f.pages += k;
      n -= k;
      if (hz.wp == zone_pages_) {
        hz.state = ZoneState::Full;
        --hz.owners;
        f.zone.reset();
      }
    }
  }

  void append(std::uint32_t slot, std::uint64_t bytes) {
    carry_[slot] += bytes;
    std::uint64_t pages = carry_[slot] / geom_.page_size;
    carry_[slot] %= geom_.page_size;
    while (pages > 0) {
      const std::size_t fi = slots_[slot];
      const std::uint64_t room = files_[fi].target_pages - files_[fi].pages;
      const std::uint64_t n = std::min(pages, room);
      write_pages(fi, n);
      pages -= n;
      if (files_[fi].pages >= files_[fi].target_pages) {
        seal(fi);
        slots_[slot] = new_file();
      }
    }
  }

  void seal(std::size_t fi) {
    HostFile& f = files_[fi];
    release(f);
    const double mean = zf_.lifetime_classes[f.cls].lifetime_ops;
    if (mean <= 0.0) return;  // never deleted
    std::exponential_distribution<double> d(1.0 / mean);
    const auto life = static_cast<std::uint64_t>(std::ceil(d(rng_)));
    deaths_.push({op_ + 1 + life, fi});
  }

  void process_deaths() {
    while (!deaths_.empty() && deaths_.top().first <= op_) {
      const std::size_t fi = deaths_.top().second;
      deaths_.pop();
      kill(fi);
    }
  }

  void kill(std::size_t fi) {
    HostFile& f = files_[fi];
    const auto extents = std::move(f.extents);
    f.extents.clear();
    if (f.live_slot != std::numeric_limits<std::size_t>::max()) {
      const std::size_t last = live_.back();
      live_[f.live_slot] = last;
      files_[last].live_slot = f.live_slot;
      live_.pop_back();
      f.live_slot = std::numeric_limits<std::size_t>::max();
    }
    for (const Extent& e : extents) {
      HostZone& hz = zones_[e.zone];
      hz.live -= e.pages;
      hz.invalid += e.pages;
      wi_bytes_ += e.pages * geom_.page_size;
      if (auto* t = dev_.sim.trace()) {
        t->invalidate(now(), clock_offset_ + static_cast<double>(op_), e.zone, e.pages, wi_bytes_);
      }
    }
    sample(static_cast<double>(op_));
    for (const Extent& e : extents) try_reset(e.zone);
  }

  void point_query() {
    if (live_.empty()) return;
    std::uniform_int_distribution<std::size_t> fd(0, live_.size() - 1);
    const HostFile& f = files_[live_[fd(rng_)]];
    std::uniform_int_distribution<std::uint64_t> pd(0, f.pages - 1);
    std::uint64_t off = pd(rng_);
    for (const Extent& e : f.extents) {
      if (off < e.pages) {
        issue({CmdKind::Read, e.zone, e.lba + off, 1});
        return;
      }
      off -= e.pages;
    }
  }

  const KvMixSpec& kv_;
  const ZenfsLiteConfig& zf_;
  Device& dev_;
  const DeviceGeometry& geom_;
  std::uint64_t zone_pages_;
  std::optional<std::uint64_t> finish_min_;
  double clock_offset_;
  std::mt19937_64 rng_;
  std::discrete_distribution<int> class_dist_;

  std::vector<HostZone> zones_;
  std::vector<HostFile> files_;
  std::vector<std::size_t> slots_;
  std::vector<std::uint64_t> carry_;
  std::vector<std::size_t> live_;
  using Death = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Death, std::vector<Death>, std::greater<>> deaths_;

  std::uint64_t op_ = 0;
  std::uint64_t wi_bytes_ = 0;
  std::vector<InvalidationSample> series_;
  std::uint64_t finishes_ = 0;
  std::uint64_t resets_ = 0;
  std::uint64_t relaxed_ = 0;
};

}  // namespace

FioReport run_fio(std::span<const FioJobSpec> specs, Device& device) {
  std::vector<std::unique_ptr<FioJob>> jobs;
  std::vector<Job*> ptrs;
  for (const auto& s : specs) {
    if (s.request_pages == 0) throw ZnsError(ErrorCode::InvalidArgument, "request_pages must be > 0");
    jobs.push_back(std::make_unique<FioJob>(s, device.zones));
    ptrs.push_back(jobs.back().get());
  }
  const Micros t0 = device.sim.now();
  device.sim.run_jobs(ptrs, RunOptions{.keep_logs = false, .stop = {}});
  FioReport report;
  std::uint64_t pages = 0;
  Micros first = Micros::max();
  for (auto& j : jobs) {
    FioJobResult r = std::move(j->result);
    r.throughput = pages_per_second(r.pages, r.finished - r.first_submit);
    pages += r.pages;
    if (!r.latencies.empty()) {
      first = std::min(first, r.first_submit);
      report.makespan = std::max(report.makespan, r.finished - t0);
    }
    report.jobs.push_back(std::move(r));
  }
  if (first != Micros::max()) {
    report.aggregate_throughput = pages_per_second(pages, t0 + report.makespan - first);
  }
  return report;
}

OccupancyResult run_occupancy(double occupancy, Device& device, ZoneId zone) {
  if (occupancy < 0.0 || occupancy > 1.0) {
    throw ZnsError(ErrorCode::InvalidValue, "occupancy must be in [0,1]");
  }
  const std::uint64_t w = static_cast<std::uint64_t>(
      std::llround(occupancy * static_cast<double>(device.geometry().zone_pages())));
  OccupancyResult r;
  r.host_pages = w;
  if (w > 0) device.sim.issue({CmdKind::Write, zone, device.zones.zone(zone).write_pointer, w}, device.sim.now());
  const CommandResult f = device.sim.issue({CmdKind::Finish, zone, 0, 0}, device.sim.now());
  r.dummy_pages = f.dummy_pages;
  r.elements_released = f.elements_released;
  r.dlwa = dlwa(r.host_pages, r.dummy_pages);
  return r;
}

InterferenceReport run_interference_bench(const InterferenceSpec& spec, const DeviceGeometry& geom,
                                          const StrategyConfig& strategy, TraceSink* trace) {
  const std::uint32_t n = spec.jobs;
  if (n == 0) throw ZnsError(ErrorCode::InvalidArgument, "jobs must be > 0");
  if (3ull * n > geom.zones_total) {
    throw ZnsError(ErrorCode::InvalidArgument, "not enough zones for the interference bench");
  }
  if (2ull * n > geom.max_open_zones) {
    throw ZnsError(ErrorCode::OpenZoneLimitExceeded, "bench needs 2*jobs open zones");
  }
  Device dev(geom, strategy, trace);
  const std::uint64_t zp = geom.zone_pages();
  const std::uint64_t writer_pages = spec.writer_pages == 0 ? zp : spec.writer_pages;
  const auto fill_pages = static_cast<std::uint64_t>(std::llround(spec.fill_fraction * static_cast<double>(zp)));

  // Seeded zone roles: [0,n) fill targets, [n,2n) phase-1 writers,
  // [2n,3n) phase-2 writers.
  std::vector<ZoneId> ids(geom.zones_total);
  std::iota(ids.begin(), ids.end(), ZoneId{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_int_distribution<std::int64_t> jitter(0, geom.t_prog.count());

  std::vector<ZoneId> fill(ids.begin(), ids.begin() + n);
  for (ZoneId z : fill) {
    if (fill_pages > 0) dev.sim.issue({CmdKind::Append, z, 0, fill_pages}, dev.sim.now());
  }

  auto run_writers = [&](std::size_t first, bool with_finish, InterferenceReport& out) {
    const Micros t0 = dev.sim.now();
    std::vector<std::unique_ptr<WriterJob>> writers;
    std::vector<Job*> ptrs;
    for (std::uint32_t j = 0; j < n; ++j) {
      writers.push_back(std::make_unique<WriterJob>(ids[first + j], writer_pages, t0 + Micros{jitter(rng)}));
      ptrs.push_back(writers.back().get());
    }
    std::unique_ptr<FinisherJob> finisher;
    if (with_finish) {
      finisher = std::make_unique<FinisherJob>(fill, t0 + Micros{jitter(rng)});
      ptrs.push_back(finisher.get());
    }
    const auto logs = dev.sim.run_jobs(ptrs, RunOptions{.keep_logs = false, .stop = {}});
    Micros end = t0;
    for (std::uint32_t j = 0; j < n; ++j) end = std::max(end, logs[j].finished);
    const double tp = pages_per_second(writer_pages * n, end - t0);
    if (trace != nullptr) trace->phase(end, with_finish ? "contended" : "base", writer_pages * n, end - t0);
    if (with_finish) {
      out.contended_throughput = tp;
      out.contended_makespan = end - t0;
      out.dummy_pages = finisher->dummy_pages;
    } else {
      out.base_throughput = tp;
      out.base_makespan = end - t0;
    }
  };

  InterferenceReport report;
  run_writers(n, false, report);
  run_writers(2 * n, true, report);
  report.factor = interference_factor(report.base_throughput, report.contended_throughput);
  report.host_pages = dev.ledger.host_pages();
  report.end_time = dev.sim.now();
  return report;
}

std::optional<std::uint64_t> ZenfsLiteConfig::finish_min_pages(std::uint64_t zone_pages) const {
  if (finish_threshold == 0) return std::nullopt;
  return ((100 - finish_threshold) * zone_pages + 99) / 100;
}

std::vector<LifetimeClass> default_lifetime_classes() {
  return {
      {"short", 64, 500.0, 0.50},
      {"medium", 64, 4000.0, 0.25},
      {"long", 64, 20000.0, 0.15},
      {"extreme", 64, 0.0, 0.10},
  };
}

ZenfsReport run_zenfs_lite(const KvMixSpec& kv, const ZenfsLiteConfig& zf, Device& device) {
  return ZenfsHost(kv, zf, device, 0.0).run();
}

ZenfsReport run_zenfs_repeated(const KvMixSpec& kv, const ZenfsLiteConfig& zf, std::uint32_t repeats,
                               Device& device) {
  if (repeats == 0) throw ZnsError(ErrorCode::InvalidArgument, "repeats must be > 0");
  ZenfsReport total;
  const Micros t0 = device.sim.now();
  const std::size_t first_sample = device.ledger.invalidated_series().size();
  for (std::uint32_t k = 0; k < repeats; ++k) {
    KvMixSpec kvk = kv;
    ZenfsLiteConfig zfk = zf;
    kvk.rng_seed = kv.rng_seed + k;
    zfk.rng_seed = zf.rng_seed + k;
    const ZenfsReport r =
        ZenfsHost(kvk, zfk, device, static_cast<double>(k) * static_cast<double>(kv.total_ops)).run();
    if (r.outcome == WorkloadOutcome::OutOfSpace) total.outcome = WorkloadOutcome::OutOfSpace;
    total.ops_completed += r.ops_completed;
    total.host_pages += r.host_pages;
    total.dummy_pages += r.dummy_pages;
    total.dummy_bytes += r.dummy_bytes;
    total.finishes += r.finishes;
    total.resets += r.resets;
    total.relaxed_placements += r.relaxed_placements;
    for (ZoneId z = 0; z < device.geometry().zones_total; ++z) {
      if (device.zones.zone(z).state != ZoneState::Empty) {
        device.sim.issue({CmdKind::Reset, z, 0, 0}, device.sim.now());
      }
    }
  }
  total.dlwa = total.host_pages == 0 ? 1.0 : dlwa(total.host_pages, total.dummy_pages);
  // One series over all repetitions (clocks are offset per repetition).
  const auto& series = device.ledger.invalidated_series();
  total.sa = space_amplification(std::span(series).subspan(first_sample), device.geometry().capacity_bytes());
  total.wear = wear_stats(device.zones.flash().block_wear());
  total.makespan = device.sim.now() - t0;
  return total;
}

}  // namespace zonesim
