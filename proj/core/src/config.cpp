#include "zonesim/config.hpp"

#include "zonesim/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace zonesim {

namespace pt = boost::property_tree;

namespace {

// Keys that may be given without a section in --set overrides.
constexpr std::array<std::pair<std::string_view, std::string_view>, 36> kKnownKeys = {{
    {"channels", "device"},
    {"luns", "device"},
    {"luns_per_channel", "device"},
    {"pages_per_block", "device"},
    {"page_size", "device"},
    {"blocks_per_zone", "device"},
    {"blocks_per_lun", "device"},
    {"zones_total", "device"},
    {"max_open_zones", "device"},
    {"t_prog_us", "device"},
    {"t_read_us", "device"},
    {"t_erase_us", "device"},
    {"t_alloc_us", "device"},
    {"t_xfer_us", "device"},
    {"profile", "device"},
    {"kind", "strategy"},
    {"chunk_size", "strategy"},
    {"parallelism_relaxed", "strategy"},
    {"strategy", "strategy"},
    {"workload", "workload"},
    {"jobs", "workload"},
    {"fill_fraction", "workload"},
    {"writer_pages", "workload"},
    {"occupancy", "workload"},
    {"finish_threshold", "workload"},
    {"total_ops", "workload"},
    {"repeats", "workload"},
    {"pattern", "workload"},
    {"request_pages", "workload"},
    {"op_count", "workload"},
    {"streams_per_class", "workload"},
    {"value_bytes_min", "workload"},
    {"value_bytes_max", "workload"},
    {"zone", "workload"},
    {"strategies", "workload"},
    {"thresholds", "workload"},
}};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string resolve_key(std::string key) {
  if (key.find('.') != std::string::npos) return key;
  // A bare section name addresses that section's kind.
  if (key == "workload") return "workload.kind";
  if (key == "strategy") return "strategy.kind";
  for (const auto& [k, section] : kKnownKeys) {
    if (k == key) return std::string(section) + "." + key;
  }
  return "workload." + key;
}

}  // namespace

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ZnsError(ErrorCode::MissingField, "cannot open config file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, doc.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ZnsError(ErrorCode::InvalidValue, std::string("config parse error: ") + e.what());
  }
  return doc;
}

bool ConfigDocument::has(const std::string& key) const {
  return tree_.get_optional<std::string>(pt::ptree::path_type(key, '.')).has_value();
}

std::optional<std::string> ConfigDocument::get(const std::string& key) const {
  auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
  if (!v) return std::nullopt;
  return trim(*v);
}

std::string ConfigDocument::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  tree_.put(pt::ptree::path_type(key, '.'), value);
}

void ConfigDocument::apply_override(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ZnsError(ErrorCode::InvalidValue,
                   "override must look like key=value: " + std::string(assignment));
  }
  set(resolve_key(trim(assignment.substr(0, eq))), trim(assignment.substr(eq + 1)));
}

std::string ConfigDocument::to_ini() const {
  std::ostringstream out;
  pt::write_ini(out, tree_);
  return out.str();
}

std::vector<std::string> ConfigDocument::keys() const {
  std::vector<std::string> out;
  for (const auto& [section, body] : tree_) {
    for (const auto& [key, value] : body) out.push_back(section + "." + key);
  }
  return out;
}

std::uint64_t parse_size(std::string_view text, const std::string& key) {
  std::string s = trim(text);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw ZnsError(ErrorCode::InvalidValue, key + ": not a number: " + s);
  }
  std::string suffix = trim(std::string_view(ptr, s.data() + s.size() - ptr));
  std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (suffix.empty() || suffix == "b") return value;
  if (suffix == "k" || suffix == "kib") return value << 10;
  if (suffix == "m" || suffix == "mib") return value << 20;
  if (suffix == "g" || suffix == "gib") return value << 30;
  throw ZnsError(ErrorCode::InvalidValue, key + ": unknown size suffix: " + suffix);
}

bool parse_flag(std::string_view text, const std::string& key) {
  std::string s = trim(text);
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw ZnsError(ErrorCode::InvalidValue, key + ": expected a boolean: " + s);
}

}  // namespace zonesim
