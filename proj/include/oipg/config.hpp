#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oipg/types.hpp"

namespace oipg {

/// Flat sectioned key-value document:
///   [section]
///   key = value        # comment
/// Order is preserved for serialization; lookups are by section + key.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(const std::string& text);
  static KeyValueDoc load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set_double(const std::string& section, const std::string& key, double value);

  bool has_section(const std::string& section) const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;

  const std::string* lookup(const std::string& section, const std::string& key) const;
};

/// Comma-separated list helper for config values.
std::vector<std::string> split_list(const std::string& value);

/// FNV-1a over the canonical serialized document; stable across runs.
std::string content_hash(const std::string& text);

}  // namespace oipg
