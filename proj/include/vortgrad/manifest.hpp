#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace vortgrad {

/// Library version string, e.g. "0.1.0".
std::string version();

/// One measured property: `tag` groups rows by the estimate they test,
/// `relation` is how measured compares to tolerance ("<=", ">=", "in", ...).
struct CheckRow {
  std::string name;
  std::string tag;
  double measured = 0.0;
  std::string relation;
  std::string tolerance;
  bool pass = false;
};

/// Flat "key = value" record of one run. Keys may repeat only for `output`
/// and `check`; everything else is a single entry in insertion order.
class RunManifest {
 public:
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;
  /// Produced files, relative to the manifest's directory.
  std::vector<std::filesystem::path> outputs;
  std::vector<CheckRow> checks;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  /// Prefixes every "k = v" line of `text` with `prefix.`; blank and # lines skipped.
  void absorb(const std::string& prefix, const std::string& text);
  void add_output(const std::filesystem::path& relative);
  void add_check(CheckRow row);
  /// Value of the first entry with `key`, or empty.
  std::string get(const std::string& key) const;

  std::string to_text() const;
  /// Throws InvalidInput naming the source and line of a malformed entry.
  static RunManifest parse(const std::string& text, const std::string& source = "manifest");
  /// Writes to dir / "manifest.txt" and returns that path.
  std::filesystem::path write(const std::filesystem::path& dir) const;
  /// Throws IoError naming `path` if it cannot be read.
  static RunManifest read(const std::filesystem::path& path);
};

struct ReportRow {
  std::filesystem::path manifest;
  CheckRow check;
};

struct Report {
  std::vector<ReportRow> rows;
  /// Files listed by a manifest but absent on disk, as full paths.
  std::vector<std::filesystem::path> missing;

  std::size_t failures() const;
  /// 0 if there is at least one check and every check passes and no file is
  /// missing; 1 otherwise.
  int exit_status() const;
  std::string to_text() const;
  std::string to_csv() const;
};

/// Reads each manifest, collects its checks and verifies its outputs exist.
/// Throws IoError naming the first manifest that cannot be read.
Report build_report(const std::vector<std::filesystem::path>& manifests);

}  // namespace vortgrad
