#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zonesim {

// Every failure the simulator can report. Device-level codes mirror the
// command errors a zoned device returns; the rest are config/host outcomes.
enum class ErrorCode {
  // geometry-config
  MissingField,
  InvalidValue,
  DivisibilityViolation,
  CapacityViolation,
  InvalidChunkSize,
  // flash-model
  IllegalTransition,
  ProgramOrderViolation,
  ProgramOnUnallocated,
  BlockFull,
  EraseValidData,
  // allocator
  InsufficientAvailability,
  DirectZoneBusy,
  NoFreePhysicalZone,
  Infeasible,
  // zone-manager
  WritePointerViolation,
  ZoneFull,
  OpenZoneLimitExceeded,
  ReadBeyondWritePointer,
  ReadUnmappedZone,
  InvalidArgument,
  // metrics
  NoHostWrites,
  EmptySeries,
  ZeroThroughput,
  // cli
  MissingRuns,
  UnknownRecipe,
};

std::string_view to_string(ErrorCode code);

class ZnsError : public std::runtime_error {
 public:
  ZnsError(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zonesim
