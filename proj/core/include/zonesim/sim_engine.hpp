#pragma once

#include "zonesim/errors.hpp"
#include "zonesim/flash.hpp"
#include "zonesim/geometry.hpp"
#include "zonesim/metrics.hpp"
#include "zonesim/zone_manager.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace zonesim {

class TraceSink;

using JobId = std::uint32_t;

struct SimEvent {
  Micros submit_time{0};
  OpKind kind = OpKind::Program;
  LunId lun = 0;
  Micros duration{0};
  JobId tag = 0;
};

// One server per LUN; events on a LUN are served in submission order.
class LunTimeline {
 public:
  explicit LunTimeline(std::uint32_t luns);

  // completion = max(submit_time, next_free(lun)) + duration
  Micros submit(const SimEvent& event);

  Micros next_free(LunId lun) const { return next_free_.at(lun); }
  Micros busy_time(LunId lun) const { return busy_.at(lun); }
  std::uint32_t luns() const { return static_cast<std::uint32_t>(next_free_.size()); }

 private:
  std::vector<Micros> next_free_;
  std::vector<Micros> busy_;
};

enum class CmdKind : std::uint8_t { Write, Append, Read, Finish, Reset };

std::string_view to_string(CmdKind kind);

struct Command {
  CmdKind kind = CmdKind::Write;
  ZoneId zone = 0;
  std::uint64_t lba = 0;    // Write/Read only
  std::uint64_t pages = 0;  // Write/Append/Read
};

struct CommandResult {
  Command command;
  std::uint64_t start_lba = 0;
  std::uint64_t dummy_pages = 0;
  std::uint32_t elements_released = 0;
  std::uint32_t elements_invalidated = 0;
  std::uint64_t zero_filled_pages = 0;
  bool allocated = false;
  Micros submitted{0};
  Micros completed{0};
};

// A virtual issuer. Commands are synchronous: next() is called again only
// once the previous command, including any dummy writes it triggered, has
// completed.
class Job {
 public:
  virtual ~Job() = default;
  virtual std::optional<Command> next(Micros now) = 0;
  virtual void on_complete(const CommandResult&) {}
  // Earliest time the first command may be issued.
  virtual Micros start() const { return Micros{0}; }
};

struct JobLog {
  JobId job = 0;
  std::vector<CommandResult> ops;
  Micros finished{0};
};

// Raised when a job's command is rejected by the device.
class JobError : public std::runtime_error {
 public:
  JobError(JobId job, ErrorCode code, const std::string& what);
  JobId job() const noexcept { return job_; }
  ErrorCode code() const noexcept { return code_; }

 private:
  JobId job_;
  ErrorCode code_;
};

struct RunOptions {
  bool keep_logs = true;
  // Evaluated before each scheduling step; true stops issuing new commands
  // (in-flight device work still drains).
  std::function<bool(Micros now)> stop;
};

// Discrete-event engine binding a ZoneManager to LUN timelines.
class Simulator {
 public:
  Simulator(ZoneManager& zones, MetricsLedger& ledger, TraceSink* trace = nullptr);

  ZoneManager& zones() { return zones_; }
  const LunTimeline& timeline() const { return timeline_; }
  MetricsLedger& ledger() { return ledger_; }
  TraceSink* trace() const { return trace_; }
  Micros now() const { return now_; }

  Micros submit(const SimEvent& event);

  // Runs jobs until all are exhausted (or `options.stop` fires) and their
  // device work has drained. Global order is (next submit time, job id);
  // device-internal dummy streams rank after every job on ties.
  std::vector<JobLog> run_jobs(std::span<Job* const> jobs, const RunOptions& options = {});

  // Issues one command at max(now(), at) and runs it to completion.
  CommandResult issue(const Command& command, Micros at = Micros{0});

 private:
  friend struct SchedulerAccess;
  ZoneManager& zones_;
  MetricsLedger& ledger_;
  TraceSink* trace_;
  LunTimeline timeline_;
  Micros now_{0};
  Micros horizon_{0};  // latest completion handed out so far
};

}  // namespace zonesim
