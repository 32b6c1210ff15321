#pragma once

#include "zonesim/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zonesim {

// Receives the device event stream. Every method corresponds to one JSONL
// record kind written by JsonlTraceWriter.
class TraceSink {
 public:
  virtual ~TraceSink() = default;

  virtual void meta(const std::map<std::string, std::string>& fields) = 0;
  virtual void command(Micros t, std::string_view kind, ZoneId zone, std::uint64_t lba,
                       std::uint64_t pages) = 0;
  virtual void alloc(Micros t, ZoneId zone, std::span<const ElementId> elements,
                     std::uint64_t objective) = 0;
  // One record per element erase; `lun` is kAllLuns for multi-LUN elements.
  virtual void erase(Micros t, ZoneId zone, ElementId element, LunId lun) = 0;
  virtual void dummy(Micros t, ZoneId zone, LunId lun, ElementId element,
                     std::uint64_t pages) = 0;
  // W_i observation; `zone` is empty for run-boundary samples.
  virtual void invalidate(Micros t, double clock, std::optional<ZoneId> zone, std::uint64_t pages,
                          std::uint64_t total_bytes) = 0;
  // Throughput phase of a benchmark: `pages` host pages completed in `span`.
  virtual void phase(Micros t, std::string_view name, std::uint64_t pages, Micros span) = 0;
  virtual void end(Micros t, std::string_view outcome, std::uint64_t host_pages) = 0;
};

// Writes one JSON object per line with a fixed key order:
//   {"t","kind","zone","lba","pages","lun","element",...}
// Optional keys are omitted, never null.
class JsonlTraceWriter final : public TraceSink {
 public:
  explicit JsonlTraceWriter(std::ostream& out);

  void meta(const std::map<std::string, std::string>& fields) override;
  void command(Micros t, std::string_view kind, ZoneId zone, std::uint64_t lba,
               std::uint64_t pages) override;
  void alloc(Micros t, ZoneId zone, std::span<const ElementId> elements,
             std::uint64_t objective) override;
  void erase(Micros t, ZoneId zone, ElementId element, LunId lun) override;
  void dummy(Micros t, ZoneId zone, LunId lun, ElementId element,
             std::uint64_t pages) override;
  void invalidate(Micros t, double clock, std::optional<ZoneId> zone, std::uint64_t pages,
                  std::uint64_t total_bytes) override;
  void phase(Micros t, std::string_view name, std::uint64_t pages, Micros span) override;
  void end(Micros t, std::string_view outcome, std::uint64_t host_pages) override;

  // Host read/write/append records are dropped unless enabled; FINISH and
  // RESET are always written.
  void set_host_io(bool enabled) { host_io_ = enabled; }

 private:
  std::ostream& out_;
  bool host_io_ = true;
};

}  // namespace zonesim
