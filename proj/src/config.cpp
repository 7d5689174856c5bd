#include "oipg/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace oipg {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

KeyValueDoc KeyValueDoc::parse(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      }
      if (!doc.has_section(current)) doc.sections_.push_back({current, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
    doc.set(current, key, value);
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string KeyValueDoc::serialize() const {
  std::ostringstream out;
  for (const auto& section : sections_) {
    out << '[' << section.name << "]\n";
    for (const auto& [key, value] : section.entries) {
      out << key << " = " << value << '\n';
    }
    out << '\n';
  }
  return out.str();
}

void KeyValueDoc::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << serialize();
}

const std::string* KeyValueDoc::lookup(const std::string& section,
                                       const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries) {
      if (k == key) return &v;
    }
  }
  return nullptr;
}

bool KeyValueDoc::has(const std::string& section, const std::string& key) const {
  return lookup(section, key) != nullptr;
}

bool KeyValueDoc::has_section(const std::string& section) const {
  for (const auto& s : sections_) {
    if (s.name == section) return true;
  }
  return false;
}

std::string KeyValueDoc::get(const std::string& section, const std::string& key) const {
  const std::string* v = lookup(section, key);
  if (v == nullptr) throw ConfigError("missing config key [" + section + "] " + key);
  return *v;
}

std::string KeyValueDoc::get_or(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
  const std::string* v = lookup(section, key);
  return v == nullptr ? fallback : *v;
}

namespace {

double parse_double(const std::string& value, const std::string& what) {
  try {
    size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + what + ": '" + value + "'");
  }
}

}  // namespace

double KeyValueDoc::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get(section, key), "[" + section + "] " + key);
}

double KeyValueDoc::get_double_or(const std::string& section, const std::string& key,
                                  double fallback) const {
  const std::string* v = lookup(section, key);
  return v == nullptr ? fallback : parse_double(*v, "[" + section + "] " + key);
}

int KeyValueDoc::get_int_or(const std::string& section, const std::string& key,
                            int fallback) const {
  const std::string* v = lookup(section, key);
  if (v == nullptr) return fallback;
  const double d = parse_double(*v, "[" + section + "] " + key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw ConfigError("expected an integer for [" + section + "] " + key);
  }
  return i;
}

std::uint64_t KeyValueDoc::get_u64(const std::string& section, const std::string& key) const {
  const std::string value = get(section, key);
  try {
    size_t used = 0;
    const unsigned long long u = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(u);
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned value for [" + section + "] " + key + ": '" + value + "'");
  }
}

bool KeyValueDoc::get_bool_or(const std::string& section, const std::string& key,
                              bool fallback) const {
  const std::string* v = lookup(section, key);
  if (v == nullptr) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("bad boolean for [" + section + "] " + key + ": '" + *v + "'");
}

void KeyValueDoc::set(const std::string& section, const std::string& key,
                      const std::string& value) {
  for (auto& s : sections_) {
    if (s.name != section) continue;
    for (auto& entry : s.entries) {
      if (entry.first == key) {
        entry.second = value;
        return;
      }
    }
    s.entries.emplace_back(key, value);
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

void KeyValueDoc::set_double(const std::string& section, const std::string& key,
                             double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  set(section, key, buffer);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : value) {
    if (c == ',') {
      const std::string item = trim(current);
      if (!item.empty()) parts.push_back(item);
      current.clear();
    } else {
      current += c;
    }
  }
  const std::string item = trim(current);
  if (!item.empty()) parts.push_back(item);
  return parts;
}

std::string content_hash(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a:%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace oipg
