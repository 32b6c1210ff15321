#include "zonesim/trace.hpp"

#include "zonesim/flash.hpp"

#include <json.hpp>

#include <ostream>

namespace zonesim {

using Record = nlohmann::ordered_json;

namespace {

Record head(Micros t, std::string_view kind) {
  Record r;
  r["t"] = t.count();
  r["kind"] = kind;
  return r;
}

}  // namespace

JsonlTraceWriter::JsonlTraceWriter(std::ostream& out) : out_(out) {}

void JsonlTraceWriter::meta(const std::map<std::string, std::string>& fields) {
  Record r = head(Micros{0}, "meta");
  for (const auto& [k, v] : fields) r[k] = v;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::command(Micros t, std::string_view kind, ZoneId zone, std::uint64_t lba,
                               std::uint64_t pages) {
  const bool io = kind == "write" || kind == "append" || kind == "read";
  if (io && !host_io_) return;
  Record r = head(t, kind);
  r["zone"] = zone;
  if (io) r["lba"] = lba;
  r["pages"] = pages;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::alloc(Micros t, ZoneId zone, std::span<const ElementId> elements,
                             std::uint64_t objective) {
  Record r = head(t, "alloc");
  r["zone"] = zone;
  r["elements"] = std::vector<ElementId>(elements.begin(), elements.end());
  r["objective"] = objective;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::erase(Micros t, ZoneId zone, ElementId element, LunId lun) {
  Record r = head(t, "erase");
  r["zone"] = zone;
  if (lun != kAllLuns) r["lun"] = lun;
  r["element"] = element;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::dummy(Micros t, ZoneId zone, LunId lun, ElementId element,
                             std::uint64_t pages) {
  Record r = head(t, "dummy");
  r["zone"] = zone;
  r["pages"] = pages;
  r["lun"] = lun;
  r["element"] = element;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::invalidate(Micros t, double clock, std::optional<ZoneId> zone,
                                  std::uint64_t pages, std::uint64_t total_bytes) {
  Record r = head(t, "invalidate");
  if (zone) r["zone"] = *zone;
  r["pages"] = pages;
  r["clock"] = clock;
  r["wi_bytes"] = total_bytes;
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::phase(Micros t, std::string_view name, std::uint64_t pages, Micros span) {
  Record r = head(t, "phase");
  r["name"] = name;
  r["pages"] = pages;
  r["span_us"] = span.count();
  out_ << r.dump() << '\n';
}

void JsonlTraceWriter::end(Micros t, std::string_view outcome, std::uint64_t host_pages) {
  Record r = head(t, "end");
  r["outcome"] = outcome;
  r["host_pages"] = host_pages;
  out_ << r.dump() << '\n';
}

}  // namespace zonesim
