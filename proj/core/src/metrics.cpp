#include "zonesim/metrics.hpp"

#include "zonesim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace zonesim {

void MetricsLedger::record_invalidated(double clock, std::uint64_t bytes) {
  invalidated_.push_back({clock, bytes});
}

void MetricsLedger::record_completion(Micros at, std::uint64_t pages) {
  completions_.emplace_back(at, pages);
}

std::vector<ThroughputSample> MetricsLedger::throughput(Micros window, Micros warmup_end) const {
  std::vector<ThroughputSample> out;
  if (window.count() <= 0) return out;
  Micros last{0};
  for (const auto& [t, pages] : completions_) last = std::max(last, t);
  if (last < warmup_end) return out;
  const auto windows = static_cast<std::size_t>((last - warmup_end) / window) + 1;
  std::vector<std::uint64_t> pages_in(windows, 0);
  for (const auto& [t, pages] : completions_) {
    if (t < warmup_end) continue;
    pages_in[static_cast<std::size_t>((t - warmup_end) / window)] += pages;
  }
  const double seconds = std::chrono::duration<double>(window).count();
  for (std::size_t i = 0; i < windows; ++i) {
    out.push_back({warmup_end + window * static_cast<Micros::rep>(i),
                   static_cast<double>(pages_in[i]) / seconds});
  }
  return out;
}

double dlwa(std::uint64_t host_pages, std::uint64_t device_pages) {
  if (host_pages == 0) throw ZnsError(ErrorCode::NoHostWrites, "DLWA undefined without host writes");
  return static_cast<double>(host_pages + device_pages) / static_cast<double>(host_pages);
}

double dlwa(const MetricsLedger& ledger) {
  return dlwa(ledger.host_pages(), ledger.device_pages());
}

SpaceAmplification space_amplification(std::span<const InvalidationSample> series,
                                       std::uint64_t device_capacity) {
  if (series.empty()) throw ZnsError(ErrorCode::EmptySeries, "no W_i samples");
  if (device_capacity == 0) throw ZnsError(ErrorCode::InvalidArgument, "zero capacity");
  SpaceAmplification sa;
  const double span = series.back().clock - series.front().clock;
  if (span <= 0.0) {
    sa.avg_bytes = static_cast<double>(series.back().bytes);
  } else {
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
      area += static_cast<double>(series[i].bytes) * (series[i + 1].clock - series[i].clock);
    }
    sa.avg_bytes = area / span;
  }
  sa.avg_normalized = sa.avg_bytes / static_cast<double>(device_capacity);
  return sa;
}

SpaceAmplification space_amplification(const MetricsLedger& ledger,
                                       std::uint64_t device_capacity) {
  return space_amplification(ledger.invalidated_series(), device_capacity);
}

WearStats wear_stats(std::span<const std::uint32_t> per_block) {
  WearStats s;
  if (per_block.empty()) return s;
  std::vector<std::uint32_t> sorted(per_block.begin(), per_block.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 == 1 ? sorted[n / 2] : (static_cast<double>(sorted[n / 2 - 1]) + static_cast<double>(sorted[n / 2])) / 2.0;
  double sum = 0.0;
  for (auto w : sorted) {
    sum += w;
    ++s.histogram[w];
  }
  s.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (auto w : sorted) sq += (w - s.mean) * (w - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(n));
  s.max = sorted.back();
  return s;
}

double interference_factor(double base_tp, double contended_tp) {
  if (base_tp <= 0.0 || contended_tp <= 0.0) {
    throw ZnsError(ErrorCode::ZeroThroughput, "throughput must be positive");
  }
  return base_tp / contended_tp;
}

std::string format_ratio(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

}  // namespace zonesim
