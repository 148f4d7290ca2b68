#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gpelab {

// INI-style configuration: [section] headers, key = value lines, '#'
// comments. Keys may repeat (used for sweep axes). Every read marks the
// entry as consumed; require_all_used() rejects configs with keys nobody
// asked for, so typos fail loudly instead of silently using defaults.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name = "<string>");

  const std::string& raw_text() const { return raw_; }
  const std::string& name() const { return name_; }

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  double require_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  void require_all_used() const;

 private:
  struct Entry {
    std::string section, key, value;
    int line = 0;
    mutable bool used = false;
  };
  std::vector<Entry> entries_;
  std::string raw_;
  std::string name_;

  double parse_double(const Entry& e) const;
  int parse_int(const Entry& e) const;
};

}  // namespace gpelab
