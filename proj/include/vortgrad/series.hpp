#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace vortgrad {

struct Sample {
  double t;
  double value;
};

/// Timestamped scalar samples; t strictly increasing, values finite.
class DiagnosticSeries {
 public:
  DiagnosticSeries() = default;
  explicit DiagnosticSeries(std::string name) : name_(std::move(name)) {}

  /// Throws InvalidInput if t does not increase or the value is not finite.
  void push(double t, double value);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  double max_value() const;

  /// Samples with t in [t_min, t_max].
  DiagnosticSeries window(double t_min, double t_max) const;

 private:
  std::string name_;
  std::vector<Sample> samples_;
};

/// Several series sharing one time column.
class DiagnosticTable {
 public:
  DiagnosticTable() = default;
  explicit DiagnosticTable(std::vector<std::string> columns);

  void add_row(double t, const std::vector<double>& values);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t rows() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double value(std::size_t row, std::size_t column) const { return data_[row][column]; }
  DiagnosticSeries series(const std::string& column) const;

  /// CSV with a header row, first column t, 17 significant digits.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<std::vector<double>> data_;
};

/// printf("%.17g").
std::string format_g17(double v);

/// Writes `text` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vortgrad
