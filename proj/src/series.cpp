#include "vortgrad/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "vortgrad/error.hpp"

namespace vortgrad {

void DiagnosticSeries::push(double t, double value) {
  if (!samples_.empty() && !(t > samples_.back().t))
    throw InvalidInput("series '" + name_ + "': time " + format_g17(t) + " does not increase");
  if (!std::isfinite(value) || !std::isfinite(t))
    throw InvalidInput("series '" + name_ + "': non-finite sample at t = " + format_g17(t));
  samples_.push_back({t, value});
}

double DiagnosticSeries::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples_) m = std::max(m, s.value);
  return m;
}

DiagnosticSeries DiagnosticSeries::window(double t_min, double t_max) const {
  DiagnosticSeries out(name_);
  for (const auto& s : samples_)
    if (s.t >= t_min && s.t <= t_max) out.samples_.push_back(s);
  return out;
}

DiagnosticTable::DiagnosticTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void DiagnosticTable::add_row(double t, const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw InvalidInput("row width does not match columns");
  if (!times_.empty() && !(t > times_.back()))
    throw InvalidInput("table time " + format_g17(t) + " does not increase");
  times_.push_back(t);
  data_.push_back(values);
}

DiagnosticSeries DiagnosticTable::series(const std::string& column) const {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end()) throw InvalidInput("no column named '" + column + "'");
  const auto c = static_cast<std::size_t>(it - columns_.begin());
  DiagnosticSeries out(column);
  for (std::size_t r = 0; r < times_.size(); ++r) out.push(times_[r], data_[r][c]);
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string DiagnosticTable::to_csv() const {
  std::string out = "t";
  for (const auto& c : columns_) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < times_.size(); ++r) {
    out += format_g17(times_[r]);
    for (double v : data_[r]) out += "," + format_g17(v);
    out += "\n";
  }
  return out;
}

void DiagnosticTable::write_csv(const std::filesystem::path& path) const {
  write_text_file(path, to_csv());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  os << text;
  if (!os) throw IoError(path.string(), "write failed");
}

}  // namespace vortgrad
