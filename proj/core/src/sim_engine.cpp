#include "zonesim/sim_engine.hpp"

#include "zonesim/errors.hpp"
#include "zonesim/trace.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <string>

namespace zonesim {

std::string_view to_string(CmdKind kind) {
  switch (kind) {
    case CmdKind::Write: return "write";
    case CmdKind::Append: return "append";
    case CmdKind::Read: return "read";
    case CmdKind::Finish: return "finish";
    case CmdKind::Reset: return "reset";
  }
  return "?";
}

JobError::JobError(JobId job, ErrorCode code, const std::string& what)
    : std::runtime_error("job " + std::to_string(job) + ": " + what), job_(job), code_(code) {}

LunTimeline::LunTimeline(std::uint32_t luns) : next_free_(luns, Micros{0}), busy_(luns, Micros{0}) {}

Micros LunTimeline::submit(const SimEvent& event) {
  Micros& free = next_free_.at(event.lun);
  const Micros start = std::max(event.submit_time, free);
  free = start + event.duration;
  busy_[event.lun] += event.duration;
  return free;
}

Simulator::Simulator(ZoneManager& zones, MetricsLedger& ledger, TraceSink* trace)
    : zones_(zones), ledger_(ledger), trace_(trace), timeline_(zones.geometry().luns_total) {}

Micros Simulator::submit(const SimEvent& event) {
  const Micros done = timeline_.submit(event);
  horizon_ = std::max(horizon_, done);
  return done;
}

namespace {

constexpr Micros kNever = Micros::max();

enum class JobState { Ready, Pending, Waiting, Done };

// The device work a command produced, waiting to be put on LUN timelines.
struct Plan {
  std::vector<FlashOp> ops;                   // submitted together
  std::map<LunId, std::deque<FlashOp>> dummy;  // one device stream per LUN
  std::uint64_t host_pages = 0;
  Micros delay{0};
};

struct Actor {
  bool is_stream = false;
  std::uint64_t rank = 0;
  Micros next_time = kNever;
  // job
  Job* job = nullptr;
  JobState state = JobState::Ready;
  CommandResult current;
  Plan plan;
  Micros batch_done{0};
  std::size_t open_streams = 0;
  // stream
  std::size_t parent = 0;
  std::deque<FlashOp> ops;
};

void trace_erases(TraceSink* trace, Micros t, ZoneId zone, const std::vector<FlashOp>& erases,
                  const FlashState& flash) {
  if (trace == nullptr) return;
  ElementId last = ~ElementId{0};
  for (const FlashOp& op : erases) {
    if (op.element == last) continue;
    last = op.element;
    trace->erase(t, zone, op.element, flash.element(op.element).lun);
  }
}

void trace_dummy(TraceSink* trace, Micros t, ZoneId zone, const std::vector<FlashOp>& ops) {
  if (trace == nullptr || ops.empty()) return;
  // Aggregate per (element, lun) in first-appearance order.
  std::vector<std::pair<std::pair<ElementId, LunId>, std::uint64_t>> runs;
  for (const FlashOp& op : ops) {
    auto key = std::make_pair(op.element, op.lun);
    auto it = std::find_if(runs.begin(), runs.end(), [&](const auto& r) { return r.first == key; });
    if (it == runs.end()) {
      runs.push_back({key, 1});
    } else {
      ++it->second;
    }
  }
  for (const auto& [key, pages] : runs) trace->dummy(t, zone, key.second, key.first, pages);
}

}  // namespace

struct SchedulerAccess {
  // Applies `cmd` to the zone manager at `now`, returning its device work.
  static Plan execute(Simulator& sim, const Command& cmd, Micros now, CommandResult& result) {
    ZoneManager& zm = sim.zones_;
    TraceSink* trace = sim.trace_;
    Plan plan;
    switch (cmd.kind) {
      case CmdKind::Write:
      case CmdKind::Append: {
        WriteOutcome w = cmd.kind == CmdKind::Write ? zm.zone_write(cmd.zone, cmd.lba, cmd.pages)
                                                    : zm.zone_append(cmd.zone, cmd.pages);
        result.start_lba = w.start_lba;
        if (trace) trace->command(now, to_string(cmd.kind), cmd.zone, w.start_lba, cmd.pages);
        if (w.allocation) {
          result.allocated = true;
          if (trace) {
            trace->alloc(now, cmd.zone, w.allocation->element_ids, w.allocation->objective_value);
          }
          trace_erases(trace, now, cmd.zone, w.erases, zm.flash());
          plan.delay = zm.geometry().t_alloc;
        }
        plan.ops = std::move(w.erases);
        plan.ops.insert(plan.ops.end(), w.programs.begin(), w.programs.end());
        plan.host_pages = cmd.pages;
        sim.ledger_.add_host_pages(cmd.pages);
        break;
      }
      case CmdKind::Read: {
        ReadOutcome r = zm.zone_read(cmd.zone, cmd.lba, cmd.pages);
        result.start_lba = cmd.lba;
        result.zero_filled_pages = r.zero_filled_pages;
        if (trace) trace->command(now, "read", cmd.zone, cmd.lba, cmd.pages);
        plan.ops = std::move(r.reads);
        break;
      }
      case CmdKind::Finish: {
        FinishReport f = zm.finish_zone(cmd.zone);
        result.dummy_pages = f.dummy_pages_written;
        result.elements_released = f.elements_released;
        if (trace) trace->command(now, "finish", cmd.zone, 0, f.dummy_pages_written);
        trace_dummy(trace, now, cmd.zone, f.dummy_ops);
        sim.ledger_.add_device_pages(f.dummy_pages_written);
        for (const FlashOp& op : f.dummy_ops) plan.dummy[op.lun].push_back(op);
        break;
      }
      case CmdKind::Reset: {
        ResetReport r = zm.reset_zone(cmd.zone);
        result.elements_invalidated = r.elements_invalidated;
        result.elements_released = r.elements_released;
        if (trace) trace->command(now, "reset", cmd.zone, 0, r.pages_discarded);
        break;
      }
    }
    return plan;
  }
};

std::vector<JobLog> Simulator::run_jobs(std::span<Job* const> jobs, const RunOptions& options) {
  std::vector<Actor> actors;
  actors.reserve(jobs.size() + 16);
  std::vector<JobLog> logs(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Actor a;
    a.rank = i;
    a.job = jobs[i];
    a.next_time = std::max(now_, jobs[i]->start());
    actors.push_back(std::move(a));
    logs[i].job = static_cast<JobId>(i);
  }
  std::uint64_t next_stream_rank = jobs.size();

  auto complete = [&](std::size_t idx, Micros done) {
    Actor& a = actors[idx];
    a.current.completed = done;
    a.job->on_complete(a.current);
    JobLog& log = logs[a.rank];
    log.finished = done;
    if (options.keep_logs) log.ops.push_back(a.current);
    a.state = JobState::Ready;
    a.next_time = done;
  };

  auto dispatch = [&](std::size_t idx) {
    // Submits the pending plan of job `idx` at now_.
    Plan plan = std::move(actors[idx].plan);
    Micros done = now_;
    const JobId tag = static_cast<JobId>(actors[idx].rank);
    for (const FlashOp& op : plan.ops) {
      done = std::max(done, submit({now_, op.kind, op.lun, op.duration, tag}));
    }
    if (plan.host_pages > 0) ledger_.record_completion(done, plan.host_pages);
    if (plan.dummy.empty()) {
      complete(idx, done);
      return;
    }
    actors[idx].state = JobState::Waiting;
    actors[idx].next_time = kNever;
    actors[idx].batch_done = done;
    actors[idx].open_streams = plan.dummy.size();
    for (auto& [lun, ops] : plan.dummy) {
      Actor s;
      s.is_stream = true;
      s.rank = next_stream_rank++;
      s.next_time = now_;
      s.parent = idx;
      s.ops = std::move(ops);
      actors.push_back(std::move(s));
    }
  };

  while (true) {
    std::size_t pick = actors.size();
    for (std::size_t i = 0; i < actors.size(); ++i) {
      const Actor& a = actors[i];
      if (a.next_time == kNever) continue;
      if (pick == actors.size() || a.next_time < actors[pick].next_time ||
          (a.next_time == actors[pick].next_time && a.rank < actors[pick].rank)) {
        pick = i;
      }
    }
    if (pick == actors.size()) break;
    now_ = std::max(now_, actors[pick].next_time);

    if (actors[pick].is_stream) {
      Actor& s = actors[pick];
      const FlashOp op = s.ops.front();
      s.ops.pop_front();
      const Micros done = submit({now_, op.kind, op.lun, op.duration, static_cast<JobId>(s.rank)});
      if (!s.ops.empty()) {
        s.next_time = done;
        continue;
      }
      s.next_time = kNever;
      Actor& parent = actors[s.parent];
      parent.batch_done = std::max(parent.batch_done, done);
      if (--parent.open_streams == 0) complete(s.parent, parent.batch_done);
      continue;
    }

    Actor& a = actors[pick];
    if (a.state == JobState::Pending) {
      a.state = JobState::Ready;
      dispatch(pick);
      continue;
    }
    if (options.stop && options.stop(now_)) {
      a.state = JobState::Done;
      a.next_time = kNever;
      continue;
    }
    std::optional<Command> cmd = a.job->next(now_);
    if (!cmd) {
      a.state = JobState::Done;
      a.next_time = kNever;
      continue;
    }
    a.current = CommandResult{};
    a.current.command = *cmd;
    a.current.submitted = now_;
    try {
      a.plan = SchedulerAccess::execute(*this, *cmd, now_, a.current);
    } catch (const ZnsError& e) {
      throw JobError(static_cast<JobId>(a.rank), e.code(), e.what());
    }
    if (a.plan.delay.count() > 0) {
      a.state = JobState::Pending;
      a.next_time = now_ + a.plan.delay;
      continue;
    }
    dispatch(pick);
  }
  now_ = std::max(now_, horizon_);
  return logs;
}

namespace {

class OneShot final : public Job {
 public:
  OneShot(Command cmd, Micros at) : cmd_(cmd), at_(at) {}
  std::optional<Command> next(Micros) override { return std::exchange(cmd_, std::nullopt); }
  void on_complete(const CommandResult& r) override { result = r; }
  Micros start() const override { return at_; }
  CommandResult result;

 private:
  std::optional<Command> cmd_;
  Micros at_;
};

}  // namespace

CommandResult Simulator::issue(const Command& command, Micros at) {
  OneShot job(command, at);
  Job* jobs[] = {&job};
  run_jobs(jobs, RunOptions{.keep_logs = false, .stop = {}});
  return job.result;
}

}  // namespace zonesim
