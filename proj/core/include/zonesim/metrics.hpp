#pragma once

#include "zonesim/geometry.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace zonesim {

// W_i observation. `clock` is whatever monotone clock the producer uses
// (host operation index for the key-value workload, virtual microseconds
// elsewhere).
struct InvalidationSample {
  double clock = 0.0;
  std::uint64_t bytes = 0;
};

struct ThroughputSample {
  Micros window_start{0};
  double pages_per_second = 0.0;
};

class MetricsLedger {
 public:
  void add_host_pages(std::uint64_t pages) { host_pages_ += pages; }
  void add_device_pages(std::uint64_t pages) { device_pages_ += pages; }
  void record_invalidated(double clock, std::uint64_t bytes);
  void record_completion(Micros at, std::uint64_t pages);

  std::uint64_t host_pages() const { return host_pages_; }      // W_h
  std::uint64_t device_pages() const { return device_pages_; }  // W_d
  const std::vector<InvalidationSample>& invalidated_series() const { return invalidated_; }

  // Pages completed per `window` of virtual time, skipping completions before
  // `warmup_end`.
  std::vector<ThroughputSample> throughput(Micros window, Micros warmup_end = Micros{0}) const;

 private:
  std::uint64_t host_pages_ = 0;
  std::uint64_t device_pages_ = 0;
  std::vector<InvalidationSample> invalidated_;
  std::vector<std::pair<Micros, std::uint64_t>> completions_;
};

// (W_h + W_d) / W_h.
double dlwa(std::uint64_t host_pages, std::uint64_t device_pages);
double dlwa(const MetricsLedger& ledger);

struct SpaceAmplification {
  double avg_bytes = 0.0;
  double avg_normalized = 0.0;
};

// Time-weighted mean of a step series; each sample holds until the next one.
SpaceAmplification space_amplification(std::span<const InvalidationSample> series,
                                       std::uint64_t device_capacity);
SpaceAmplification space_amplification(const MetricsLedger& ledger,
                                       std::uint64_t device_capacity);

struct WearStats {
  double median = 0.0;
  double stddev = 0.0;  // population
  double mean = 0.0;
  std::uint32_t max = 0;
  std::map<std::uint32_t, std::uint32_t> histogram;  // erase count -> blocks
};

WearStats wear_stats(std::span<const std::uint32_t> per_block_erases);

double interference_factor(double base_tp, double contended_tp);

// Fixed 4-decimal rendering used in every report.
std::string format_ratio(double value);

}  // namespace zonesim
