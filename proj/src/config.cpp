#include "qis/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qis/error.hpp"

namespace qis::io {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scene",      "stack",      "out",        "fast",       "bits",
      "q",          "frames",     "photons",    "alpha",      "seed",
      "read_noise", "dark_rate",  "denoiser",   "sigma",      "rho",
      "lambda",     "max_iters",  "primal_tol", "gamma",      "ccm",
      "peak",       "scene_gamma_decode",       "patch_radius",
      "search_radius",            "smooth_weight",            "seeds",
      "photon_levels",            "unbiased_inverse",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys = {"scene", "stack", "ccm"};
  return keys;
}

} // namespace

Config Config::from_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config '" + origin + "' line " + std::to_string(line_no) +
                    ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw IoError("config '" + origin + "' line " + std::to_string(line_no) +
                    ": empty key or value");
    if (known_keys().count(key) == 0)
      throw IoError("config '" + origin + "' line " + std::to_string(line_no) +
                    ": unknown key '" + key + "'");
    if (cfg.values_.count(key) != 0)
      throw IoError("config '" + origin + "' line " + std::to_string(line_no) +
                    ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  for (const auto& [key, value] : cfg.values_) {
    if (path_keys().count(key) != 0 && !std::filesystem::exists(value))
      throw IoError("config '" + origin + "': " + key + " file '" + value +
                    "' does not exist");
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << file.rdbuf();
  return from_text(text.str(), path);
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw IoError("config key '" + key + "': bad number '" + it->second + "'");
  }
  if (pos != it->second.size())
    throw IoError("config key '" + key + "': bad number '" + it->second + "'");
  return v;
}

long Config::get_int(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(it->second, &pos);
  } catch (const std::exception&) {
    throw IoError("config key '" + key + "': bad integer '" + it->second +
                  "'");
  }
  if (pos != it->second.size())
    throw IoError("config key '" + key + "': bad integer '" + it->second +
                  "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw IoError("config key '" + key + "': bad boolean '" + v + "'");
}

} // namespace qis::io
