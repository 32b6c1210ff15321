#include "zonesim/flash.hpp"

#include "zonesim/errors.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace zonesim {

std::string_view to_string(Availability a) {
  switch (a) {
    case Availability::Free: return "free";
    case Availability::AllocatedEmpty: return "allocated_empty";
    case Availability::AllocatedValid: return "allocated_valid";
    case Availability::FreeInvalid: return "free_invalid";
  }
  return "?";
}

std::string_view to_string(ElementEvent e) {
  switch (e) {
    case ElementEvent::Allocate: return "Allocate";
    case ElementEvent::FirstProgram: return "FirstProgram";
    case ElementEvent::FinishRelease: return "FinishRelease";
    case ElementEvent::ResetInvalidate: return "ResetInvalidate";
    case ElementEvent::ResetRelease: return "ResetRelease";
    case ElementEvent::EraseComplete: return "EraseComplete";
  }
  return "?";
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Program: return "program";
    case OpKind::Read: return "read";
    case OpKind::Erase: return "erase";
    case OpKind::AllocDelay: return "alloc_delay";
  }
  return "?";
}

Transition element_transition(Availability state, ElementEvent event) {
  using A = Availability;
  using E = ElementEvent;
  switch (event) {
    case E::Allocate:
      if (state == A::Free) return {A::AllocatedEmpty, false};
      if (state == A::FreeInvalid) return {A::AllocatedEmpty, true};
      break;
    case E::FirstProgram:
      if (state == A::AllocatedEmpty) return {A::AllocatedValid, false};
      break;
    case E::FinishRelease:
    case E::ResetRelease:
      if (state == A::AllocatedEmpty) return {A::Free, false};
      break;
    case E::ResetInvalidate:
      if (state == A::AllocatedValid) return {A::FreeInvalid, false};
      break;
    case E::EraseComplete:
      if (state == A::FreeInvalid) return {A::Free, false};
      break;
  }
  throw ZnsError(ErrorCode::IllegalTransition, std::string(to_string(event)) + " from " +
                                                   std::string(to_string(state)));
}

ElementShape shape_for(const StrategyConfig& cfg) {
  switch (cfg.kind) {
    case StrategyKind::Chunk: return ElementShape::Chunk;
    case StrategyKind::Stripe: return ElementShape::Stripe;
    case StrategyKind::Direct:
    case StrategyKind::Lazy: return ElementShape::FullZone;
  }
  return ElementShape::FullZone;
}

FlashState::FlashState(const DeviceGeometry& geom, const StrategyConfig& strategy)
    : geom_(geom), shape_(shape_for(strategy)) {
  const std::uint32_t L = geom.luns_total;
  const std::uint32_t per_lun = geom.blocks_per_lun;
  switch (shape_) {
    case ElementShape::Chunk: {
      const std::uint32_t cs = strategy.chunk_size;
      blocks_per_element_ = cs;
      const std::uint32_t chunks_per_lun = per_lun / cs;
      elements_.reserve(std::size_t{chunks_per_lun} * L);
      for (LunId l = 0; l < L; ++l) {
        for (std::uint32_t k = 0; k < chunks_per_lun; ++k) {
          StorageElement e;
          e.id = static_cast<ElementId>(elements_.size());
          e.lun = l;
          for (std::uint32_t j = 0; j < cs; ++j) e.block_ids.push_back(l * per_lun + k * cs + j);
          elements_.push_back(std::move(e));
        }
      }
      break;
    }
    case ElementShape::Stripe: {
      blocks_per_element_ = L;
      elements_.reserve(per_lun);
      for (std::uint32_t n = 0; n < per_lun; ++n) {
        StorageElement e;
        e.id = n;
        e.lun = kAllLuns;
        for (LunId l = 0; l < L; ++l) e.block_ids.push_back(l * per_lun + n);
        elements_.push_back(std::move(e));
      }
      break;
    }
    case ElementShape::FullZone: {
      const std::uint32_t E = geom.blocks_per_lun_per_zone;
      blocks_per_element_ = E * L;
      const std::uint32_t count = per_lun / E;
      elements_.reserve(count);
      for (std::uint32_t n = 0; n < count; ++n) {
        StorageElement e;
        e.id = n;
        e.lun = kAllLuns;
        for (LunId l = 0; l < L; ++l) {
          for (std::uint32_t j = 0; j < E; ++j) e.block_ids.push_back(l * per_lun + n * E + j);
        }
        elements_.push_back(std::move(e));
      }
      break;
    }
  }
  for (auto& e : elements_) {
    e.programmed_pages.assign(e.block_ids.size(), 0);
    e.free_stamp = next_stamp_++;
  }
}

const StorageElement& FlashState::element(ElementId id) const {
  if (id >= elements_.size()) {
    throw ZnsError(ErrorCode::InvalidArgument, "element " + std::to_string(id) + " out of range");
  }
  return elements_[id];
}

StorageElement& FlashState::mut(ElementId id) {
  return const_cast<StorageElement&>(element(id));
}

void FlashState::apply(StorageElement& e, ElementEvent event) {
  const Transition t = element_transition(e.avail, event);
  e.avail = t.next;
  if (is_allocatable(e.avail) && event != ElementEvent::EraseComplete) {
    e.free_stamp = next_stamp_++;
  }
}

std::vector<FlashOp> FlashState::allocate(ElementId id) {
  StorageElement& e = mut(id);
  const Transition t = element_transition(e.avail, ElementEvent::Allocate);
  std::vector<FlashOp> ops;
  if (t.requires_erase) ops = erase_element(id);
  apply(e, ElementEvent::Allocate);
  return ops;
}

std::vector<FlashOp> FlashState::erase_element(ElementId id) {
  StorageElement& e = mut(id);
  if (e.avail == Availability::AllocatedValid) {
    throw ZnsError(ErrorCode::EraseValidData,
                   "element " + std::to_string(id) + " holds valid data");
  }
  apply(e, ElementEvent::EraseComplete);
  ++e.wear;
  ++element_erases_;
  std::vector<FlashOp> ops;
  ops.reserve(e.block_ids.size());
  for (std::size_t m = 0; m < e.block_ids.size(); ++m) {
    e.programmed_pages[m] = 0;
    FlashOp op;
    op.kind = OpKind::Erase;
    op.block = e.block_ids[m];
    op.lun = geom_.lun_of_block(op.block);
    op.duration = geom_.t_erase;
    op.element = id;
    ops.push_back(op);
  }
  return ops;
}

FlashOp FlashState::program_page(ElementId id, std::uint32_t member, std::uint32_t page_index) {
  StorageElement& e = mut(id);
  if (!(e.avail == Availability::AllocatedEmpty || e.avail == Availability::AllocatedValid)) {
    throw ZnsError(ErrorCode::ProgramOnUnallocated,
                   "element " + std::to_string(id) + " is " + std::string(to_string(e.avail)));
  }
  if (member >= e.block_ids.size()) {
    throw ZnsError(ErrorCode::InvalidArgument, "member block out of range");
  }
  if (page_index >= geom_.pages_per_block || e.programmed_pages[member] >= geom_.pages_per_block) {
    throw ZnsError(ErrorCode::BlockFull, "block " + std::to_string(e.block_ids[member]) +
                                             " page " + std::to_string(page_index));
  }
  if (page_index != e.programmed_pages[member]) {
    throw ZnsError(ErrorCode::ProgramOrderViolation,
                   "block " + std::to_string(e.block_ids[member]) + " expects page " +
                       std::to_string(e.programmed_pages[member]) + ", got " +
                       std::to_string(page_index));
  }
  ++e.programmed_pages[member];
  if (e.avail == Availability::AllocatedEmpty) apply(e, ElementEvent::FirstProgram);
  FlashOp op;
  op.kind = OpKind::Program;
  op.block = e.block_ids[member];
  op.lun = geom_.lun_of_block(op.block);
  op.duration = geom_.t_prog + geom_.t_xfer;
  op.element = id;
  op.page = page_index;
  return op;
}

FlashOp FlashState::make_read(ElementId id, std::uint32_t member, std::uint32_t page) const {
  const StorageElement& e = element(id);
  FlashOp op;
  op.kind = OpKind::Read;
  op.block = e.block_ids.at(member);
  op.lun = geom_.lun_of_block(op.block);
  op.duration = geom_.t_read + geom_.t_xfer;
  op.element = id;
  op.page = page;
  return op;
}

void FlashState::release_unused(ElementId id) { apply(mut(id), ElementEvent::FinishRelease); }

bool FlashState::reset_release(ElementId id) {
  StorageElement& e = mut(id);
  if (e.avail == Availability::AllocatedValid) {
    apply(e, ElementEvent::ResetInvalidate);
    return true;
  }
  apply(e, ElementEvent::ResetRelease);
  return false;
}

AvailabilityCounts FlashState::counts() const {
  AvailabilityCounts c;
  for (const auto& e : elements_) ++c.by_state[static_cast<std::size_t>(e.avail)];
  return c;
}

std::vector<std::uint32_t> FlashState::block_wear() const {
  std::vector<std::uint32_t> wear(geom_.total_blocks(), 0);
  for (const auto& e : elements_) {
    for (BlockId b : e.block_ids) wear[b] = e.wear;
  }
  return wear;
}

void FlashState::seed_wear(ElementId id, std::uint32_t wear) { mut(id).wear = wear; }

void FlashState::dump_jsonl(std::ostream& out) const {
  for (const auto& e : elements_) {
    nlohmann::ordered_json rec;
    rec["id"] = e.id;
    if (e.lun == kAllLuns) {
      rec["lun"] = "all";
    } else {
      rec["lun"] = e.lun;
    }
    rec["wear"] = e.wear;
    rec["avail"] = static_cast<int>(e.avail);
    rec["programmed_pages"] = e.programmed_pages;
    out << rec.dump() << '\n';
  }
}

}  // namespace zonesim
