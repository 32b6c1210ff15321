#pragma once

#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zonesim {

// ConfigDocument is a sectioned key-value document ([device], [strategy],
// [workload]). Keys are addressed as "section.key".
class ConfigDocument {
 public:
  ConfigDocument() = default;

  static ConfigDocument load(const std::filesystem::path& path);
  static ConfigDocument parse(std::string_view text);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, const std::string& value);

  // Applies a "key=value" override. Keys without a section are resolved
  // against the known key table (e.g. "jobs" -> "workload.jobs",
  // "workload" -> "workload.kind").
  void apply_override(std::string_view assignment);

  std::string to_ini() const;

  // Flattened "section.key" names in document order.
  std::vector<std::string> keys() const;

 private:
  boost::property_tree::ptree tree_;
};

// Parses an unsigned integer, accepting KiB/MiB/GiB (and K/M/G) suffixes.
std::uint64_t parse_size(std::string_view text, const std::string& key);
bool parse_flag(std::string_view text, const std::string& key);

}  // namespace zonesim
