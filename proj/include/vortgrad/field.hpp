#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "vortgrad/grid.hpp"

namespace vortgrad {

using Complex = std::complex<double>;

/// Half-plane spectrum of a real field: n rows (ky) by n/2+1 columns (kx),
/// unnormalized forward transform.
using Spectrum = std::vector<Complex>;

/// Real periodic scalar on a Grid. Carries the spectrum it was synthesized
/// from, when known, so that forward transforms of solver output are exact.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid);
  ScalarField(const Grid& grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t iy = 0; iy < grid.n(); ++iy)
      for (std::size_t ix = 0; ix < grid.n(); ++ix)
        out.values_[grid.offset(ix, iy)] = f(grid.coord(ix), grid.coord(iy));
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  /// Mutable access drops the cached spectrum.
  std::span<double> mutable_values() noexcept;

  double operator()(std::size_t ix, std::size_t iy) const noexcept {
    return values_[grid_.offset(ix, iy)];
  }

  double mean() const;
  double sup_abs() const;
  bool all_finite() const;

  const std::optional<Spectrum>& cached_spectrum() const noexcept { return spectrum_; }
  void attach_spectrum(Spectrum s) { spectrum_ = std::move(s); }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
  std::optional<Spectrum> spectrum_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Sup over the grid of |a - b|.
double sup_distance(const ScalarField& a, const ScalarField& b);

/// Velocity (u, v) on a grid.
struct VelocityField {
  ScalarField u;
  ScalarField v;

  double max_speed() const;
};

}  // namespace vortgrad
