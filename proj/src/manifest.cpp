#include "vortgrad/manifest.hpp"

#include <boost/algorithm/string.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vortgrad/error.hpp"
#include "vortgrad/series.hpp"

#ifndef VORTGRAD_VERSION
#define VORTGRAD_VERSION "unknown"
#endif

namespace vortgrad {

std::string version() { return VORTGRAD_VERSION; }

namespace {

// check = name | tag | measured | relation | tolerance | PASS
std::string check_line(const CheckRow& c) {
  return c.name + " | " + c.tag + " | " + format_g17(c.measured) + " | " + c.relation + " | " +
         c.tolerance + " | " + (c.pass ? "PASS" : "FAIL");
}

CheckRow parse_check(const std::string& value, const std::string& where) {
  std::vector<std::string> parts;
  boost::split(parts, value, boost::is_any_of("|"));
  if (parts.size() != 6) throw InvalidInput(where + ": check needs 6 '|'-separated fields");
  for (auto& p : parts) boost::trim(p);
  CheckRow c;
  c.name = parts[0];
  c.tag = parts[1];
  try {
    c.measured = std::stod(parts[2]);
  } catch (const std::exception&) {
    // nan and inf round-trip through %.17g but not always through stod
    c.measured = std::numeric_limits<double>::quiet_NaN();
  }
  c.relation = parts[3];
  c.tolerance = parts[4];
  if (parts[5] != "PASS" && parts[5] != "FAIL")
    throw InvalidInput(where + ": check status must be PASS or FAIL");
  c.pass = parts[5] == "PASS";
  return c;
}

void require_single_line(const std::string& s, const std::string& what) {
  if (s.find('\n') != std::string::npos) throw InvalidInput(what + " must be a single line");
}

}  // namespace

void RunManifest::set(const std::string& key, const std::string& value) {
  require_single_line(key, "manifest key");
  require_single_line(value, "manifest value for " + key);
  if (key == "output" || key == "check" || key == "command")
    throw InvalidInput("manifest key '" + key + "' is reserved");
  for (auto& [k, v] : entries)
    if (k == key) {
      v = value;
      return;
    }
  entries.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) { set(key, format_g17(value)); }

void RunManifest::absorb(const std::string& prefix, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    boost::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    set(prefix + "." + boost::trim_copy(line.substr(0, eq)), boost::trim_copy(line.substr(eq + 1)));
  }
}

void RunManifest::add_output(const std::filesystem::path& relative) {
  for (const auto& o : outputs)
    if (o == relative) return;
  outputs.push_back(relative);
}

void RunManifest::add_check(CheckRow row) {
  for (const auto* f : {&row.name, &row.tag, &row.relation, &row.tolerance})
    if (f->find('|') != std::string::npos || f->find('\n') != std::string::npos)
      throw InvalidInput("check field '" + *f + "' contains '|' or a newline");
  checks.push_back(std::move(row));
}

std::string RunManifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return {};
}

std::string RunManifest::to_text() const {
  std::ostringstream os;
  os << "command = " << command << "\n";
  for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
  for (const auto& o : outputs) os << "output = " << o.generic_string() << "\n";
  for (const auto& c : checks) os << "check = " << check_line(c) << "\n";
  return os.str();
}

RunManifest RunManifest::parse(const std::string& text, const std::string& source) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    boost::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput(where + ": expected 'key = value'");
    const std::string key = boost::trim_copy(line.substr(0, eq));
    const std::string value = boost::trim_copy(line.substr(eq + 1));
    if (key.empty()) throw InvalidInput(where + ": empty key");
    if (key == "command")
      m.command = value;
    else if (key == "output")
      m.outputs.emplace_back(value);
    else if (key == "check")
      m.checks.push_back(parse_check(value, where));
    else
      m.entries.emplace_back(key, value);
  }
  return m;
}

std::filesystem::path RunManifest::write(const std::filesystem::path& dir) const {
  const auto path = dir / "manifest.txt";
  write_text_file(path, to_text());
  return path;
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open manifest");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::size_t Report::failures() const {
  std::size_t n = missing.size();
  for (const auto& r : rows)
    if (!r.check.pass) ++n;
  return n;
}

int Report::exit_status() const { return (!rows.empty() && failures() == 0) ? 0 : 1; }

std::string Report::to_text() const {
  std::ostringstream os;
  std::size_t wname = 5, wtag = 3;
  for (const auto& r : rows) {
    wname = std::max(wname, r.check.name.size());
    wtag = std::max(wtag, r.check.tag.size());
  }
  os << std::left << std::setw(6) << "status" << "  " << std::setw(static_cast<int>(wtag)) << "tag"
     << "  " << std::setw(static_cast<int>(wname)) << "check" << "  measured / tolerance\n";
  for (const auto& r : rows) {
    const auto& c = r.check;
    std::ostringstream m;
    m << std::setprecision(6) << c.measured;
    os << std::setw(6) << (c.pass ? "PASS" : "FAIL") << "  " << std::setw(static_cast<int>(wtag))
       << c.tag << "  " << std::setw(static_cast<int>(wname)) << c.name << "  " << m.str() << " "
       << c.relation << " " << c.tolerance << "\n";
  }
  for (const auto& p : missing) os << "MISSING file listed in manifest: " << p.string() << "\n";
  os << rows.size() << " checks, " << failures() << " failures";
  if (rows.empty()) os << " (no checks recorded)";
  os << "\n";
  return os.str();
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "manifest,tag,check,measured,relation,tolerance,status\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    return "\"" + boost::replace_all_copy(s, "\"", "\"\"") + "\"";
  };
  for (const auto& r : rows) {
    const auto& c = r.check;
    os << quote(r.manifest.generic_string()) << "," << quote(c.tag) << "," << quote(c.name) << ","
       << format_g17(c.measured) << "," << quote(c.relation) << "," << quote(c.tolerance) << ","
       << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  for (const auto& p : missing)
    os << quote(p.generic_string()) << ",missing-file," << quote(p.filename().string())
       << ",nan,exists,,FAIL\n";
  return os.str();
}

Report build_report(const std::vector<std::filesystem::path>& manifests) {
  if (manifests.empty()) throw InvalidInput("report needs at least one manifest");
  Report rep;
  for (const auto& path : manifests) {
    const auto m = RunManifest::read(path);
    const auto dir = path.parent_path();
    for (const auto& o : m.outputs) {
      const auto full = dir / o;
      if (!std::filesystem::exists(full)) rep.missing.push_back(full);
    }
    for (const auto& c : m.checks) rep.rows.push_back({path, c});
  }
  return rep;
}

}  // namespace vortgrad
