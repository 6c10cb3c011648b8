#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gfsplit/errors.hpp"

namespace gfsplit::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw InvalidInput("config: key '" + key + "' is not a number: " + s);
  return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: line " + std::to_string(lineno) +
                         " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InvalidInput("config: line " + std::to_string(lineno) +
                         " has an empty key or value");
    if (cfg.kv_.count(key))
      throw InvalidInput("config: duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw InvalidInput("config: missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string_or(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return to_double(key, get_string(key));
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::size_t Config::get_count(const std::string& key) const {
  const double v = get_double(key);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw InvalidInput("config: key '" + key + "' is not a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::size_t Config::get_count_or(const std::string& key, std::size_t fallback) const {
  return has(key) ? get_count(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const std::string s = get_string(key);
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw InvalidInput("config: key '" + key + "' has no entries");
  return out;
}

std::vector<std::size_t> Config::get_counts(const std::string& key) const {
  std::vector<std::size_t> out;
  for (double v : get_doubles(key)) {
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw InvalidInput("config: key '" + key + "' has a non-integer entry");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void Config::require_known_keys(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : kv_) {
    (void)value;
    bool ok = false;
    for (const auto& k : known)
      if (k == key) {
        ok = true;
        break;
      }
    if (!ok) throw InvalidInput("config: unknown key '" + key + "'");
  }
}

}  // namespace gfsplit::cli
