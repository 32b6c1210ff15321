#include "zonesim/verify.hpp"

#include "zonesim/errors.hpp"
#include "zonesim/zone_manager.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <random>
#include <sstream>

namespace zonesim::verify {

namespace {

struct Best {
  std::uint64_t objective = 0;
  std::uint32_t mask = 0;
  bool found = false;
};

Best enumerate(const AllocationRequest& req, bool per_lun_exact) {
  const auto n = static_cast<std::uint32_t>(req.elements.size());
  Best best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) != req.zone_elements) continue;
    std::uint64_t sum = 0;
    bool ok = true;
    std::vector<std::uint32_t> per_lun(req.luns, 0);
    for (std::uint32_t i = 0; i < n && ok; ++i) {
      if ((mask >> i & 1u) == 0) continue;
      const StorageElement& e = req.elements[i];
      if (!is_allocatable(e.avail)) ok = false;
      sum += e.wear;
      if (e.lun < req.luns) ++per_lun[e.lun];
    }
    if (!ok) continue;
    if (per_lun_exact &&
        !std::all_of(per_lun.begin(), per_lun.end(), [&](auto c) { return c == req.per_lun(); })) {
      continue;
    }
    if (!best.found || sum < best.objective) best = {sum, mask, true};
  }
  return best;
}

}  // namespace

AllocationResult oracle_solve(const AllocationRequest& req) {
  if (req.elements.size() > 20) throw ZnsError(ErrorCode::InvalidArgument, "oracle limited to N <= 20");
  Best best;
  bool relaxed = false;
  if (req.strategy.kind == StrategyKind::Chunk) {
    if (req.zone_elements % req.luns == 0) best = enumerate(req, true);
    if (!best.found && req.strategy.parallelism_relaxed) {
      best = enumerate(req, false);
      relaxed = true;
    }
  } else {
    best = enumerate(req, false);
  }
  if (!best.found) throw ZnsError(ErrorCode::Infeasible, "no feasible selection");
  AllocationResult r;
  for (std::uint32_t i = 0; i < req.elements.size(); ++i) {
    if (best.mask >> i & 1u) r.element_ids.push_back(static_cast<ElementId>(i));
  }
  r.objective_value = best.objective;
  r.relaxed = relaxed;
  return r;
}

Instance::Instance(const Instance& other) : elements(other.elements), request(other.request) {
  request.elements = elements;
}

Instance& Instance::operator=(const Instance& other) {
  elements = other.elements;
  request = other.request;
  request.elements = elements;
  return *this;
}

std::string Instance::dump() const {
  std::ostringstream os;
  os << "strategy=" << strategy_name(request.strategy) << " L=" << request.luns
     << " Z=" << request.zone_elements << " N=" << elements.size() << "\n";
  for (const auto& e : elements) {
    os << "  element " << e.id << " lun=";
    if (e.lun == kAllLuns) {
      os << "all";
    } else {
      os << e.lun;
    }
    os << " wear=" << e.wear << " avail=" << static_cast<int>(e.avail) << "\n";
  }
  return os.str();
}

std::string_view to_string(InstanceMode m) {
  switch (m) {
    case InstanceMode::ChunkStrict: return "chunk-strict";
    case InstanceMode::ChunkRelaxed: return "chunk-relaxed";
    case InstanceMode::Stripe: return "stripe";
  }
  return "?";
}

Instance random_instance(InstanceMode mode, std::uint64_t seed, std::uint32_t max_elements) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  Instance inst;
  auto& req = inst.request;
  std::discrete_distribution<int> avail({4, 2, 2, 3});
  if (mode == InstanceMode::Stripe) {
    const std::uint32_t n = pick(1, max_elements);
    req.luns = pick(1, 4);
    req.zone_elements = pick(1, n);
    req.strategy.kind = StrategyKind::Stripe;
    for (std::uint32_t i = 0; i < n; ++i) {
      StorageElement e;
      e.id = i;
      e.lun = kAllLuns;
      inst.elements.push_back(e);
    }
  } else {
    const std::uint32_t luns = std::array<std::uint32_t, 3>{1, 2, 4}[pick(0, 2)];
    const std::uint32_t per = pick(1, max_elements / luns);
    const std::uint32_t g = pick(1, per);
    req.luns = luns;
    req.zone_elements = g * luns;
    req.strategy.kind = StrategyKind::Chunk;
    req.strategy.chunk_size = 1;
    req.strategy.parallelism_relaxed = mode == InstanceMode::ChunkRelaxed;
    for (std::uint32_t l = 0; l < luns; ++l) {
      for (std::uint32_t k = 0; k < per; ++k) {
        StorageElement e;
        e.id = static_cast<ElementId>(inst.elements.size());
        e.lun = l;
        inst.elements.push_back(e);
      }
    }
  }
  for (auto& e : inst.elements) {
    e.wear = pick(0, 5);
    e.avail = static_cast<Availability>(avail(rng));
  }
  req.elements = inst.elements;
  return inst;
}

AllocationResult mutant_solve(const AllocationRequest& req) {
  std::vector<StorageElement> copy(req.elements.begin(), req.elements.end());
  for (auto& e : copy) {
    if (e.avail == Availability::FreeInvalid) e.avail = Availability::AllocatedValid;
  }
  AllocationRequest r = req;
  r.elements = copy;
  AllocationResult result = allocate(r);
  return result;
}

CheckReport check_allocator(std::uint64_t count, std::uint64_t seed, const Solver& solver) {
  CheckReport report;
  std::uint64_t s = seed;
  for (InstanceMode mode : {InstanceMode::ChunkStrict, InstanceMode::ChunkRelaxed, InstanceMode::Stripe}) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const Instance inst = random_instance(mode, s++);
      ++report.checked;
      std::optional<AllocationResult> expect;
      std::optional<AllocationResult> got;
      std::string got_error;
      try {
        expect = oracle_solve(inst.request);
      } catch (const ZnsError&) {
      }
      try {
        got = solver(inst.request);
      } catch (const ZnsError& e) {
        got_error = e.what();
      }
      std::ostringstream why;
      if (expect && !got) {
        why << "solver failed (" << got_error << ") but oracle objective is " << expect->objective_value;
      } else if (!expect && got) {
        why << "solver returned objective " << got->objective_value << " on an infeasible instance";
      } else if (expect && got) {
        ++report.feasible;
        if (got->objective_value != expect->objective_value) {
          why << "objective " << got->objective_value << " != oracle " << expect->objective_value;
        } else if (!satisfies_constraints(inst.request, *got)) {
          why << "result violates constraints";
        }
      }
      if (!why.str().empty()) {
        report.counterexample = std::string(to_string(mode)) + " instance #" + std::to_string(i) +
                                ": " + why.str() + "\n" + inst.dump();
        return report;
      }
    }
  }
  return report;
}

CheckReport check_state_machine() {
  using A = Availability;
  using E = ElementEvent;
  struct Edge {
    A from;
    E event;
    A to;
    bool erase;
  };
  static constexpr Edge kLegal[] = {
      {A::Free, E::Allocate, A::AllocatedEmpty, false},
      {A::FreeInvalid, E::Allocate, A::AllocatedEmpty, true},
      {A::AllocatedEmpty, E::FirstProgram, A::AllocatedValid, false},
      {A::AllocatedEmpty, E::FinishRelease, A::Free, false},
      {A::AllocatedEmpty, E::ResetRelease, A::Free, false},
      {A::AllocatedValid, E::ResetInvalidate, A::FreeInvalid, false},
      {A::FreeInvalid, E::EraseComplete, A::Free, false},
  };
  CheckReport report;
  for (A s : kAllAvailability) {
    for (E ev : kAllElementEvents) {
      ++report.checked;
      const Edge* legal = nullptr;
      for (const Edge& e : kLegal) {
        if (e.from == s && e.event == ev) legal = &e;
      }
      std::string why;
      try {
        const Transition t = element_transition(s, ev);
        if (legal == nullptr) {
          why = "accepted illegal edge";
        } else if (t.next != legal->to || t.requires_erase != legal->erase) {
          why = "wrong target " + std::string(to_string(t.next));
        }
      } catch (const ZnsError& e) {
        if (legal != nullptr) why = "rejected legal edge";
        else if (e.code() != ErrorCode::IllegalTransition) why = "wrong error " + std::string(to_string(e.code()));
      }
      if (!why.empty()) {
        report.counterexample = "(" + std::string(to_string(s)) + ", " + std::string(to_string(ev)) + "): " + why;
        return report;
      }
    }
  }
  return report;
}

CheckReport check_invariants(const DeviceGeometry& geom, const StrategyConfig& strategy,
                             std::uint64_t commands, std::uint64_t seed) {
  ZoneManager zm(geom, strategy);
  std::mt19937_64 rng(seed);
  const std::uint64_t zp = geom.zone_pages();
  const std::uint32_t n = zm.flash().counts().total();
  std::vector<std::uint64_t> last_wp(geom.zones_total, 0);
  CheckReport report;
  std::discrete_distribution<int> op({6, 2, 2, 1, 1});

  auto fail = [&](std::uint64_t i, const std::string& what) {
    report.counterexample = "command #" + std::to_string(i) + ": " + what;
  };

  for (std::uint64_t i = 0; i < commands; ++i) {
    const ZoneId z = std::uniform_int_distribution<ZoneId>(0, geom.zones_total - 1)(rng);
    const int kind = op(rng);
    const ZoneDescriptor before = zm.zone(z);
    ++report.checked;
    try {
      switch (kind) {
        case 0: {
          const std::uint64_t pages = std::uniform_int_distribution<std::uint64_t>(1, std::max<std::uint64_t>(1, zp / 4))(rng);
          zm.zone_append(z, pages);
          break;
        }
        case 1: {
          // Occasionally misaligned to exercise WritePointerViolation.
          const std::uint64_t lba = before.write_pointer + (rng() % 8 == 0 ? 1 : 0);
          zm.zone_write(z, lba, 1);
          break;
        }
        case 2: {
          if (before.write_pointer > 0) {
            const std::uint64_t lba = rng() % before.write_pointer;
            zm.zone_read(z, lba, 1);
          }
          break;
        }
        case 3: {
          const FinishReport f = zm.finish_zone(z);
          if (const auto* mapped = zm.mapping().elements_of(z)) {
            for (ElementId id : *mapped) {
              for (std::uint32_t p : zm.flash().element(id).programmed_pages) {
                if (p != geom.pages_per_block) {
                  fail(i, "finished zone holds a partially programmed element " + std::to_string(id));
                  return report;
                }
              }
            }
          }
          if (before.state == ZoneState::Open) {
            const std::uint64_t g = zm.group_pages();
            const std::uint64_t expect = (g - before.write_pointer % g) % g;
            if (f.dummy_pages_written != expect) {
              fail(i, "finish dummy pages " + std::to_string(f.dummy_pages_written) + " != " + std::to_string(expect));
              return report;
            }
          }
          break;
        }
        case 4:
          zm.reset_zone(z);
          break;
      }
    } catch (const ZnsError& e) {
      switch (e.code()) {
        case ErrorCode::ZoneFull:
        case ErrorCode::WritePointerViolation:
        case ErrorCode::OpenZoneLimitExceeded:
        case ErrorCode::InsufficientAvailability:
        case ErrorCode::NoFreePhysicalZone:
        case ErrorCode::DirectZoneBusy:
        case ErrorCode::ReadUnmappedZone:
          break;  // legal rejections
        default:
          fail(i, std::string("unexpected error ") + e.what());
          return report;
      }
      if (zm.zone(z).write_pointer != before.write_pointer || zm.zone(z).state != before.state) {
        fail(i, "rejected command changed zone state");
        return report;
      }
    }

    const ZoneDescriptor& after = zm.zone(z);
    if (zm.flash().counts().total() != n) {
      fail(i, "element count changed");
      return report;
    }
    if (!zm.mapping().bijective()) {
      fail(i, "mapping is not bijective");
      return report;
    }
    if (zm.open_zones() > geom.max_open_zones) {
      fail(i, "open zone cap exceeded");
      return report;
    }
    const bool reset = after.state == ZoneState::Empty && before.state != ZoneState::Empty;
    if (!reset && after.write_pointer < last_wp[z]) {
      fail(i, "write pointer moved backwards without reset");
      return report;
    }
    const bool empty_shape = after.write_pointer == 0 && zm.mapping().elements_of(z) == nullptr;
    if ((after.state == ZoneState::Empty) != empty_shape && after.state != ZoneState::Full) {
      fail(i, "Empty state disagrees with write pointer / mapping");
      return report;
    }
    if ((after.state == ZoneState::Full) != (after.write_pointer == zp)) {
      fail(i, "Full state disagrees with write pointer");
      return report;
    }
    for (const StorageElement& e : zm.flash().elements()) {
      if (e.avail != Availability::Free && e.avail != Availability::AllocatedEmpty) continue;
      for (std::uint32_t p : e.programmed_pages) {
        if (p != 0) {
          fail(i, "unwritten-state element " + std::to_string(e.id) + " has programmed pages");
          return report;
        }
      }
    }
    std::uint32_t open = 0;
    for (ZoneId k = 0; k < geom.zones_total; ++k) open += zm.zone(k).state == ZoneState::Open;
    if (open != zm.open_zones()) {
      fail(i, "open zone counter drifted");
      return report;
    }
    last_wp[z] = after.write_pointer;
  }
  return report;
}

}  // namespace zonesim::verify
