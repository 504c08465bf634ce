#include <algorithm>
#include <cmath>

#include "vortgrad/error.hpp"
#include "vortgrad/field.hpp"

namespace vortgrad {

Grid::Grid(std::size_t n) : n_(n) {
  if (n < 16 || (n & (n - 1)) != 0)
    throw InvalidInput("grid size must be a power of two >= 16, got " + std::to_string(n));
}

double Grid::centered(std::size_t i) const noexcept {
  const auto si = static_cast<double>(i);
  const auto sn = static_cast<double>(n_);
  return (2 * i < n_ ? si : si - sn) * spacing();
}

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidInput("field has " + std::to_string(values_.size()) + " values, grid needs " +
                       std::to_string(grid_.size()));
}

std::span<double> ScalarField::mutable_values() noexcept {
  spectrum_.reset();
  return values_;
}

double ScalarField::mean() const {
  // Compensated sum.
  double sum = 0.0, comp = 0.0;
  for (double v : values_) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values_.size());
}

double ScalarField::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  if (!(other.grid_ == grid_)) throw InvalidInput("grid mismatch in field addition");
  auto out = mutable_values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  if (!(other.grid_ == grid_)) throw InvalidInput("grid mismatch in field subtraction");
  auto out = mutable_values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : mutable_values()) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double sup_distance(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw InvalidInput("grid mismatch in sup_distance");
  double m = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

double VelocityField::max_speed() const {
  double m = 0.0;
  const auto uv = u.values();
  const auto vv = v.values();
  for (std::size_t i = 0; i < uv.size(); ++i) m = std::max(m, std::hypot(uv[i], vv[i]));
  return m;
}

}  // namespace vortgrad
