#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gfsplit::cli {

// Flat key = value configuration file ('#' starts a comment). Keys are
// validated by the consuming command; unknown keys are rejected up front.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key) const;
  std::size_t get_count_or(const std::string& key, std::size_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma separated
  std::vector<std::size_t> get_counts(const std::string& key) const;

  void require_known_keys(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace gfsplit::cli
