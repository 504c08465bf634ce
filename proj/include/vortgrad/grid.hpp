#pragma once

#include <cstddef>
#include <numbers>

namespace vortgrad {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform n x n sampling of the torus [0, 2pi)^2.
class Grid {
 public:
  /// Throws InvalidInput unless n is a power of two and n >= 16.
  explicit Grid(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ * n_; }
  double spacing() const noexcept { return kTwoPi / static_cast<double>(n_); }
  double cell_area() const noexcept { return spacing() * spacing(); }

  /// Coordinate of index i in [0, 2pi).
  double coord(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
  /// Coordinate of index i in [-pi, pi).
  double centered(std::size_t i) const noexcept;
  /// Index of the point mirrored through the origin.
  std::size_t mirror(std::size_t i) const noexcept { return (n_ - i) % n_; }
  /// Storage offset; rows are y, columns are x.
  std::size_t offset(std::size_t ix, std::size_t iy) const noexcept { return iy * n_ + ix; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

}  // namespace vortgrad
