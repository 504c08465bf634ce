#include "config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vortgrad::cli {

namespace pt = boost::property_tree;

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  try {
    pt::read_ini(in, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  // The ini reader keeps no positions; recover them for error messages.
  std::istringstream again(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(again, line)) {
    ++lineno;
    boost::trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = boost::trim_copy(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = boost::trim_copy(line.substr(0, eq));
    if (section.empty())
      throw ConfigError(source + ":" + std::to_string(lineno) + ": key '" + key +
                        "' appears before any [section]");
    c.lines_[section + "." + key] = lineno;
  }
  return c;
}

std::string Config::where(const std::string& key) const {
  const auto it = lines_.find(key);
  return it == lines_.end() ? source_ : source_ + ":" + std::to_string(it->second);
}

void Config::reject_value(const std::string& key, const std::string& what) const {
  throw ConfigError(where(key) + ": " + key + ": " + what);
}

bool Config::has(const std::string& key) const {
  return static_cast<bool>(tree_.get_optional<std::string>(key));
}

bool Config::has_section(const std::string& section) const {
  return tree_.find(section) != tree_.not_found();
}

std::optional<std::string> Config::find_string(const std::string& key) const {
  if (auto v = tree_.get_optional<std::string>(key)) return *v;
  return std::nullopt;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return find_string(key).value_or(fallback);
}

std::string Config::require_string(const std::string& key) const {
  if (auto v = find_string(key)) return *v;
  throw ConfigError(source_ + ": missing required key " + key);
}

std::optional<double> Config::find_double(const std::string& key) const {
  const auto s = find_string(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const char* end = s->data() + s->size();
  const auto [ptr, ec] = std::from_chars(s->data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    reject_value(key, "expected a finite number, got '" + *s + "'");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return find_double(key).value_or(fallback);
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  const auto s = find_string(key);
  if (!s) return fallback;
  std::size_t v = 0;
  const char* end = s->data() + s->size();
  const auto [ptr, ec] = std::from_chars(s->data(), end, v);
  if (ec != std::errc() || ptr != end) reject_value(key, "expected a non-negative integer, got '" + *s + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto s = find_string(key);
  if (!s) return fallback;
  const auto v = boost::to_lower_copy(*s);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  reject_value(key, "expected true or false, got '" + *s + "'");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto s = find_string(key);
  if (!s) return fallback;
  std::vector<std::string> parts;
  boost::split(parts, *s, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(v))
      reject_value(key, "list entry '" + p + "' is not a finite number");
    out.push_back(v);
  }
  if (out.empty()) reject_value(key, "empty list");
  return out;
}

void Config::set(const std::string& key, const std::string& value) { tree_.put(key, value); }

void Config::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [section, body] : tree_) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(source_ + ": key '" + section + "' is outside any section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known.count(full)) throw ConfigError(where(full) + ": unknown key " + full);
    }
  }
}

std::string Config::to_text() const {
  std::vector<std::pair<std::size_t, std::string>> rows;
  for (const auto& [section, body] : tree_)
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = lines_.find(full);
      // keys set by a sweep sort after the file's own keys
      const std::size_t order = it == lines_.end() ? static_cast<std::size_t>(-1) : it->second;
      rows.emplace_back(order, full + " = " + value.data());
    }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& r : rows) out += r.second + "\n";
  return out;
}

std::filesystem::path Config::base_dir() const {
  const std::filesystem::path p(source_);
  return p.has_parent_path() ? p.parent_path() : std::filesystem::path(".");
}

}  // namespace vortgrad::cli
