#pragma once

#include "zonesim/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace zonesim {

// Availability of a storage element.
enum class Availability : std::uint8_t {
  Free = 0,            // erased, not mapped
  AllocatedEmpty = 1,  // mapped, nothing programmed yet
  AllocatedValid = 2,  // mapped, holds data
  FreeInvalid = 3,     // unmapped, holds stale data; erase before reuse
};

enum class ElementEvent : std::uint8_t {
  Allocate,
  FirstProgram,
  FinishRelease,
  ResetInvalidate,
  ResetRelease,
  EraseComplete,
};

inline constexpr std::array<Availability, 4> kAllAvailability = {
    Availability::Free, Availability::AllocatedEmpty, Availability::AllocatedValid,
    Availability::FreeInvalid};
inline constexpr std::array<ElementEvent, 6> kAllElementEvents = {
    ElementEvent::Allocate,        ElementEvent::FirstProgram, ElementEvent::FinishRelease,
    ElementEvent::ResetInvalidate, ElementEvent::ResetRelease, ElementEvent::EraseComplete};

std::string_view to_string(Availability a);
std::string_view to_string(ElementEvent e);

struct Transition {
  Availability next;
  bool requires_erase = false;  // Allocate out of FreeInvalid
};

// The availability state machine. Throws ZnsError(IllegalTransition) for
// any (state, event) pair outside the legal edge set.
Transition element_transition(Availability state, ElementEvent event);

inline bool is_allocatable(Availability a) {
  return a == Availability::Free || a == Availability::FreeInvalid;
}

// How physical blocks are grouped into storage elements.
enum class ElementShape { Chunk, Stripe, FullZone };

inline constexpr LunId kAllLuns = ~LunId{0};

struct StorageElement {
  ElementId id = 0;
  LunId lun = 0;  // kAllLuns for stripes and full zones
  std::vector<BlockId> block_ids;
  std::vector<std::uint32_t> programmed_pages;  // parallel to block_ids
  std::uint32_t wear = 0;
  Availability avail = Availability::Free;
  // Order in which the element last became allocatable; lazy mapping
  // hands elements out least-recently-freed first.
  std::uint64_t free_stamp = 0;
};

enum class OpKind : std::uint8_t { Program, Read, Erase, AllocDelay };

std::string_view to_string(OpKind kind);

// A timed flash operation produced by the device model and realized by the
// event engine.
struct FlashOp {
  OpKind kind = OpKind::Program;
  LunId lun = 0;
  Micros duration{0};
  ElementId element = 0;
  BlockId block = 0;
  std::uint32_t page = 0;
};

struct AvailabilityCounts {
  std::array<std::uint32_t, 4> by_state{};
  std::uint32_t total() const {
    return by_state[0] + by_state[1] + by_state[2] + by_state[3];
  }
  std::uint32_t operator[](Availability a) const {
    return by_state[static_cast<std::size_t>(a)];
  }
};

ElementShape shape_for(const StrategyConfig& cfg);

// Physical state of every erase block and storage element.
class FlashState {
 public:
  FlashState(const DeviceGeometry& geom, const StrategyConfig& strategy);

  const DeviceGeometry& geometry() const { return geom_; }
  ElementShape shape() const { return shape_; }
  std::uint32_t blocks_per_element() const { return blocks_per_element_; }

  std::size_t element_count() const { return elements_.size(); }
  const StorageElement& element(ElementId id) const;
  std::span<const StorageElement> elements() const { return elements_; }

  // Allocate transition. Out of FreeInvalid the element is erased first and
  // the returned ops hold one erase per member block.
  std::vector<FlashOp> allocate(ElementId id);

  // Programs the next page of one member block. page_index must equal the
  // block's programmed page count.
  FlashOp program_page(ElementId id, std::uint32_t member, std::uint32_t page_index);

  // Physically erases an invalid element: wear + 1, pages cleared, a 3 -> 0.
  std::vector<FlashOp> erase_element(ElementId id);

  void release_unused(ElementId id);  // finish: 1 -> 0
  // reset: 2 -> 3 or 1 -> 0. Returns true when the element held data.
  bool reset_release(ElementId id);

  AvailabilityCounts counts() const;
  std::uint64_t element_erases() const { return element_erases_; }

  // Per physical block erase counts (element wear expanded to members).
  std::vector<std::uint32_t> block_wear() const;

  FlashOp make_read(ElementId id, std::uint32_t member, std::uint32_t page) const;

  // Test/benchmark preconditioning: overwrite an element's wear.
  void seed_wear(ElementId id, std::uint32_t wear);

  // One JSON record per element:
  // {"id","lun","wear","avail","programmed_pages":[...]}
  void dump_jsonl(std::ostream& out) const;

 private:
  StorageElement& mut(ElementId id);
  void apply(StorageElement& e, ElementEvent event);

  DeviceGeometry geom_;
  ElementShape shape_;
  std::uint32_t blocks_per_element_ = 0;
  std::vector<StorageElement> elements_;
  std::uint64_t next_stamp_ = 0;
  std::uint64_t element_erases_ = 0;
};

}  // namespace zonesim
