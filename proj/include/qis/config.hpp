#pragma once

#include <map>
#include <string>

namespace qis::io {

// Flat key = value experiment configuration. '#' starts a comment, blank
// lines are skipped, unknown keys are rejected. Keys mirror the CLI flags;
// referenced files must exist at load time.
class Config {
public:
  static Config load(const std::string& path);
  static Config from_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

} // namespace qis::io
