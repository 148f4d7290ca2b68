#include "gpelab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gpelab/errors.hpp"

namespace gpelab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.raw_ = text;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any [section]");
    cfg.entries_.push_back({section, key, value, lineno});
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) return true;
  return false;
}

std::optional<std::string> Config::get(const std::string& section,
                                       const std::string& key) const {
  const Entry* found = nullptr;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.used = true;
      found = &e;
    }
  }
  if (!found) return std::nullopt;
  return found->value;
}

std::vector<std::string> Config::get_all(const std::string& section,
                                         const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.used = true;
      out.push_back(e.value);
    }
  }
  return out;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const auto v = get(section, key);
  return v ? *v : fallback;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  const auto v = get(section, key);
  if (!v) throw ConfigError(name_ + ": missing required key [" + section + "] " + key);
  return *v;
}

double Config::parse_double(const Entry& e) const {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(name_ + ":" + std::to_string(e.line) + ": [" + e.section + "] " + e.key +
                      ": not a number: '" + e.value + "'");
  }
}

int Config::parse_int(const Entry& e) const {
  int v = 0;
  const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || p != e.value.data() + e.value.size())
    throw ConfigError(name_ + ":" + std::to_string(e.line) + ": [" + e.section + "] " + e.key +
                      ": not an integer: '" + e.value + "'");
  return v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const Entry* found = nullptr;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.used = true;
      found = &e;
    }
  }
  return found ? parse_double(*found) : fallback;
}

double Config::require_double(const std::string& section, const std::string& key) const {
  const Entry* found = nullptr;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.used = true;
      found = &e;
    }
  }
  if (!found) throw ConfigError(name_ + ": missing required key [" + section + "] " + key);
  return parse_double(*found);
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry* found = nullptr;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.used = true;
      found = &e;
    }
  }
  return found ? parse_int(*found) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  throw ConfigError(name_ + ": [" + section + "] " + key + ": not a boolean: '" + *v + "'");
}

void Config::require_all_used() const {
  for (const auto& e : entries_) {
    if (!e.used)
      throw ConfigError(name_ + ":" + std::to_string(e.line) + ": unknown key [" + e.section +
                        "] " + e.key);
  }
}

}  // namespace gpelab
