#include "zonesim/errors.hpp"

namespace zonesim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorCode::CapacityViolation: return "CapacityViolation";
    case ErrorCode::InvalidChunkSize: return "InvalidChunkSize";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::ProgramOrderViolation: return "ProgramOrderViolation";
    case ErrorCode::ProgramOnUnallocated: return "ProgramOnUnallocated";
    case ErrorCode::BlockFull: return "BlockFull";
    case ErrorCode::EraseValidData: return "EraseValidData";
    case ErrorCode::InsufficientAvailability: return "InsufficientAvailability";
    case ErrorCode::DirectZoneBusy: return "DirectZoneBusy";
    case ErrorCode::NoFreePhysicalZone: return "NoFreePhysicalZone";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::WritePointerViolation: return "WritePointerViolation";
    case ErrorCode::ZoneFull: return "ZoneFull";
    case ErrorCode::OpenZoneLimitExceeded: return "OpenZoneLimitExceeded";
    case ErrorCode::ReadBeyondWritePointer: return "ReadBeyondWritePointer";
    case ErrorCode::ReadUnmappedZone: return "ReadUnmappedZone";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoHostWrites: return "NoHostWrites";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::ZeroThroughput: return "ZeroThroughput";
    case ErrorCode::MissingRuns: return "MissingRuns";
    case ErrorCode::UnknownRecipe: return "UnknownRecipe";
  }
  return "Unknown";
}

ZnsError::ZnsError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace zonesim
