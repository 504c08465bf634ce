#pragma once

#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortgrad::cli {

/// Config file problem; the message carries file:line where one is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key = value text ([grid] n = 256). Keys are addressed as
/// "section.key". Comments start with # or ;.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, const std::string& source = "<config>");

  bool has(const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> find_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> find_double(const std::string& key) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma or whitespace separated numbers.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  /// Like get_string but fails if the key is absent.
  std::string require_string(const std::string& key) const;

  /// Overrides or adds a key; used by sweeps to derive members.
  void set(const std::string& key, const std::string& value);

  /// Throws ConfigError for the first key not in `known` (section.key).
  void reject_unknown(const std::set<std::string>& known) const;

  /// Every key as "section.key = value", in file order.
  std::string to_text() const;
  const std::string& source() const noexcept { return source_; }
  /// Directory relative paths in the config are resolved against.
  std::filesystem::path base_dir() const;

  /// Throws ConfigError pointing at the line of `key`.
  [[noreturn]] void reject_value(const std::string& key, const std::string& what) const;

 private:
  std::string where(const std::string& key) const;

  boost::property_tree::ptree tree_;
  std::string source_;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace vortgrad::cli
