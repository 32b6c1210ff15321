#include "zonesim/geometry.hpp"

#include "zonesim/errors.hpp"

#include <charconv>
#include <string>

namespace zonesim {

namespace {

std::uint64_t required(const ConfigDocument& doc, const std::string& key) {
  auto v = doc.get(key);
  if (!v) throw ZnsError(ErrorCode::MissingField, "missing " + key);
  std::uint64_t n = parse_size(*v, key);
  if (n == 0) throw ZnsError(ErrorCode::InvalidValue, key + " must be positive");
  return n;
}

std::uint64_t optional_value(const ConfigDocument& doc, const std::string& key,
                             std::uint64_t fallback) {
  auto v = doc.get(key);
  return v ? parse_size(*v, key) : fallback;
}

std::uint32_t narrow(std::uint64_t v, const std::string& key) {
  if (v > 0xffffffffULL) throw ZnsError(ErrorCode::InvalidValue, key + " out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

bool is_full_zone(StrategyKind kind) {
  return kind == StrategyKind::Direct || kind == StrategyKind::Lazy;
}

std::string strategy_name(const StrategyConfig& cfg) {
  switch (cfg.kind) {
    case StrategyKind::Direct: return "direct";
    case StrategyKind::Lazy: return "lazy";
    case StrategyKind::Stripe: return "stripe";
    case StrategyKind::Chunk:
      return "chunk-" + std::to_string(cfg.chunk_size) +
             (cfg.parallelism_relaxed ? "-relaxed" : "");
  }
  return "unknown";
}

StrategyConfig parse_strategy_name(std::string_view name) {
  StrategyConfig cfg;
  if (name == "direct") {
    cfg.kind = StrategyKind::Direct;
  } else if (name == "lazy") {
    cfg.kind = StrategyKind::Lazy;
  } else if (name == "stripe") {
    cfg.kind = StrategyKind::Stripe;
  } else if (name.starts_with("chunk")) {
    cfg.kind = StrategyKind::Chunk;
    std::string_view rest = name.substr(5);
    constexpr std::string_view kRelaxed = "-relaxed";
    if (rest.ends_with(kRelaxed)) {
      cfg.parallelism_relaxed = true;
      rest.remove_suffix(kRelaxed.size());
    }
    if (!rest.empty()) {
      if (rest.front() != '-') {
        throw ZnsError(ErrorCode::InvalidValue, "bad strategy name " + std::string(name));
      }
      rest.remove_prefix(1);
      auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), cfg.chunk_size);
      if (ec != std::errc{} || p != rest.data() + rest.size()) {
        throw ZnsError(ErrorCode::InvalidValue, "bad chunk size in " + std::string(name));
      }
    }
  } else {
    throw ZnsError(ErrorCode::InvalidValue, "unknown strategy " + std::string(name));
  }
  return cfg;
}

DeviceGeometry validate_geometry(const ConfigDocument& raw) {
  DeviceGeometry g;
  g.channels = narrow(required(raw, "device.channels"), "device.channels");
  if (raw.has("device.luns")) {
    g.luns_total = narrow(required(raw, "device.luns"), "device.luns");
    if (g.luns_total % g.channels != 0) {
      throw ZnsError(ErrorCode::DivisibilityViolation,
                     "channels (" + std::to_string(g.channels) + ") must divide luns (" +
                         std::to_string(g.luns_total) + ")");
    }
    g.luns_per_channel = g.luns_total / g.channels;
  } else {
    g.luns_per_channel =
        narrow(required(raw, "device.luns_per_channel"), "device.luns_per_channel");
    g.luns_total = g.luns_per_channel * g.channels;
  }
  g.pages_per_block = narrow(required(raw, "device.pages_per_block"), "device.pages_per_block");
  g.page_size = required(raw, "device.page_size");
  g.blocks_per_zone = narrow(required(raw, "device.blocks_per_zone"), "device.blocks_per_zone");
  g.zones_total = narrow(required(raw, "device.zones_total"), "device.zones_total");
  g.max_open_zones = narrow(required(raw, "device.max_open_zones"), "device.max_open_zones");

  if (g.blocks_per_zone % g.luns_total != 0) {
    throw ZnsError(ErrorCode::DivisibilityViolation,
                   "luns (" + std::to_string(g.luns_total) + ") must divide blocks_per_zone (" +
                       std::to_string(g.blocks_per_zone) + ")");
  }
  g.blocks_per_lun_per_zone = g.blocks_per_zone / g.luns_total;

  const std::uint64_t needed = std::uint64_t{g.zones_total} * g.blocks_per_zone;
  const std::uint64_t per_lun = optional_value(
      raw, "device.blocks_per_lun", std::uint64_t{g.zones_total} * g.blocks_per_lun_per_zone);
  if (per_lun * g.luns_total < needed) {
    throw ZnsError(ErrorCode::CapacityViolation,
                   std::to_string(g.zones_total) + " zones need " + std::to_string(needed) +
                       " blocks, device has " + std::to_string(per_lun * g.luns_total));
  }
  g.blocks_per_lun = narrow(per_lun, "device.blocks_per_lun");

  if (g.max_open_zones > g.zones_total) {
    throw ZnsError(ErrorCode::InvalidValue, "max_open_zones exceeds zones_total");
  }

  auto latency = [&](const char* key, std::uint64_t fallback, bool may_be_zero) {
    std::uint64_t v = optional_value(raw, key, fallback);
    if (v == 0 && !may_be_zero) {
      throw ZnsError(ErrorCode::InvalidValue, std::string(key) + " must be positive");
    }
    return Micros{static_cast<Micros::rep>(v)};
  };
  g.t_prog = latency("device.t_prog_us", 700, false);
  g.t_read = latency("device.t_read_us", 60, false);
  g.t_erase = latency("device.t_erase_us", 3500, false);
  g.t_alloc = latency("device.t_alloc_us", 0, true);
  g.t_xfer = latency("device.t_xfer_us", 0, true);
  return g;
}

void write_geometry(const DeviceGeometry& g, ConfigDocument& doc) {
  doc.set("device.channels", std::to_string(g.channels));
  doc.set("device.luns", std::to_string(g.luns_total));
  doc.set("device.pages_per_block", std::to_string(g.pages_per_block));
  doc.set("device.page_size", std::to_string(g.page_size));
  doc.set("device.blocks_per_zone", std::to_string(g.blocks_per_zone));
  doc.set("device.blocks_per_lun", std::to_string(g.blocks_per_lun));
  doc.set("device.zones_total", std::to_string(g.zones_total));
  doc.set("device.max_open_zones", std::to_string(g.max_open_zones));
  doc.set("device.t_prog_us", std::to_string(g.t_prog.count()));
  doc.set("device.t_read_us", std::to_string(g.t_read.count()));
  doc.set("device.t_erase_us", std::to_string(g.t_erase.count()));
  doc.set("device.t_alloc_us", std::to_string(g.t_alloc.count()));
  doc.set("device.t_xfer_us", std::to_string(g.t_xfer.count()));
}

StrategyConfig validate_strategy(const StrategyConfig& cfg, const DeviceGeometry& geom) {
  if (cfg.kind == StrategyKind::Chunk) {
    const std::uint32_t e = geom.blocks_per_lun_per_zone;
    if (cfg.chunk_size == 0 || cfg.chunk_size > e || e % cfg.chunk_size != 0) {
      throw ZnsError(ErrorCode::InvalidChunkSize,
                     "chunk size " + std::to_string(cfg.chunk_size) +
                         " must divide E = " + std::to_string(e));
    }
    if (geom.blocks_per_lun % cfg.chunk_size != 0) {
      throw ZnsError(ErrorCode::InvalidChunkSize,
                     "chunk size must divide blocks_per_lun");
    }
  }
  if (is_full_zone(cfg.kind) && geom.blocks_per_lun % geom.blocks_per_lun_per_zone != 0) {
    throw ZnsError(ErrorCode::DivisibilityViolation,
                   "full-zone mapping needs E to divide blocks_per_lun");
  }
  return cfg;
}

StrategyConfig strategy_from_config(const ConfigDocument& raw) {
  std::string kind = raw.get_or("strategy.kind", "stripe");
  StrategyConfig cfg = parse_strategy_name(kind);
  if (auto cs = raw.get("strategy.chunk_size")) {
    cfg.chunk_size = narrow(parse_size(*cs, "strategy.chunk_size"), "strategy.chunk_size");
  }
  if (auto relaxed = raw.get("strategy.parallelism_relaxed")) {
    cfg.parallelism_relaxed = parse_flag(*relaxed, "strategy.parallelism_relaxed");
  }
  return cfg;
}

std::uint32_t elements_per_zone(const StrategyConfig& cfg, const DeviceGeometry& geom) {
  switch (cfg.kind) {
    case StrategyKind::Direct:
    case StrategyKind::Lazy: return 1;
    case StrategyKind::Stripe: return geom.blocks_per_lun_per_zone;
    case StrategyKind::Chunk: return geom.blocks_per_zone / cfg.chunk_size;
  }
  return 0;
}

ConfigDocument zn540_profile() {
  return ConfigDocument::parse(
      "[device]\n"
      "channels = 4\n"
      "luns = 4\n"
      "pages_per_block = 768\n"
      "page_size = 16KiB\n"
      "blocks_per_zone = 88\n"
      "zones_total = 48\n"
      "max_open_zones = 14\n"
      "t_prog_us = 700\n"
      "t_read_us = 60\n"
      "t_erase_us = 3500\n");
}

ConfigDocument g_small_profile() {
  return ConfigDocument::parse(
      "[device]\n"
      "channels = 4\n"
      "luns = 4\n"
      "pages_per_block = 4\n"
      "page_size = 4KiB\n"
      "blocks_per_zone = 8\n"
      "zones_total = 4\n"
      "max_open_zones = 2\n");
}

ConfigDocument desk_profile() {
  return ConfigDocument::parse(
      "[device]\n"
      "channels = 4\n"
      "luns = 4\n"
      "pages_per_block = 16\n"
      "page_size = 16KiB\n"
      "blocks_per_zone = 88\n"
      "zones_total = 48\n"
      "max_open_zones = 10\n"
      "t_prog_us = 700\n"
      "t_read_us = 60\n"
      "t_erase_us = 3500\n");
}

ConfigDocument desk_tight_profile() {
  ConfigDocument doc = desk_profile();
  doc.set("device.zones_total", "28");
  doc.set("device.max_open_zones", "9");
  return doc;
}

ConfigDocument named_profile(std::string_view name) {
  if (name == "zn540") return zn540_profile();
  if (name == "g-small") return g_small_profile();
  if (name == "desk") return desk_profile();
  if (name == "desk-tight") return desk_tight_profile();
  throw ZnsError(ErrorCode::InvalidValue, "unknown device profile '" + std::string(name) + "'");
}

DeviceGeometry geometry_from_config(const ConfigDocument& raw) {
  const auto profile = raw.get("device.profile");
  if (!profile) return validate_geometry(raw);
  ConfigDocument merged = named_profile(*profile);
  for (const std::string& key : raw.keys()) {
    if (key.rfind("device.", 0) == 0 && key != "device.profile") merged.set(key, *raw.get(key));
  }
  // An explicit luns_per_channel replaces the profile's luns.
  if (raw.has("device.luns_per_channel") && !raw.has("device.luns")) {
    const auto channels = parse_size(merged.get_or("device.channels", "0"), "device.channels");
    const auto per = parse_size(*raw.get("device.luns_per_channel"), "device.luns_per_channel");
    merged.set("device.luns", std::to_string(channels * per));
  }
  return validate_geometry(merged);
}

}  // namespace zonesim
