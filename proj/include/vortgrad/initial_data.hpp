#pragma once

#include "vortgrad/field.hpp"
#include "vortgrad/ladder.hpp"

namespace vortgrad {

/// sgn(x) sgn(y) on the fundamental domain [-pi, pi)^2, zero on the axes.
/// Equivalently sgn(sin x) sgn(sin y).
ScalarField singular_cross(const Grid& grid);

/// Unit-mass radial kernel proportional to exp(-1/(1 - r^2)) on the unit
/// disc, with the integrals needed to convolve it against a sign cross.
class Mollifier {
 public:
  Mollifier();

  /// Kernel density at radius r (zero for r >= 1).
  double density(double r) const;
  /// E[sgn(t + a)] for t >= 0, a the first coordinate of a kernel sample.
  double half_line_mass(double t) const;
  /// E[sgn(p + a) sgn(q + b)] for p, q >= 0.
  double quadrant_expectation(double p, double q) const;

 private:
  double upper_corner_mass(double p, double q) const;
  double normalization_;
};

/// Mollification options; min_cells is the number of grid cells sigma must span.
struct MollifyOptions {
  double min_cells = 8.0;
};

/// theta0^s * omega_sigma evaluated exactly per grid point. Points farther
/// than sigma from every arm keep the singular value bit for bit.
ScalarField mollified_cross(const Grid& grid, double sigma, MollifyOptions opts = {});

/// Distance from grid index to the nearest zero line of sin (0 or pi).
double arm_distance(const Grid& grid, std::size_t i);

/// Steep radial bump: height h2, support diameter h1, centred at (x, y) in
/// the open first quadrant. The realized field adds the mirror copy at -center.
struct BumpSpec {
  double center_x = 0.0;
  double center_y = 0.0;
  double support_diameter = 0.0;  ///< h1
  double height = 0.0;            ///< h2
};

/// Max |d/ds| of the unit-height profile per unit radius; ||grad b|| is about
/// kBumpSlopeConstant * 2 * h2 / h1.
inline constexpr double kBumpSlopeConstant = 2.9254;

/// Even pair b(z) + b(-z) of mean-free profiles (1 - k s^2) exp(1 - 1/(1 - s^2)),
/// s = |z - c| / (h1 / 2), with k fixed so each copy sums to zero on the grid.
/// Throws InvalidInput if h1 spans fewer than min_cells cells or the support
/// leaves the open first quadrant.
BumpSpec validate_bump(const Grid& grid, const BumpSpec& spec, double min_cells = 8.0);
ScalarField make_bump(const Grid& grid, const BumpSpec& spec, double min_cells = 8.0);

/// As make_bump, but first requires the centre in Omega_0 of `ladder`;
/// throws ConstraintViolation naming the failed inequality.
ScalarField make_bump(const Grid& grid, const BumpSpec& spec, const ParameterLadder& ladder);

/// Desk-scale placement: the support must clear the mollified arms and sit in
/// the sector y > x where the cross flow contracts.
void require_desk_placement(const BumpSpec& spec, double sigma);

/// theta~_sigma + b. Throws ConstraintViolation if ||result||_inf >= 2.
ScalarField compose_initial_data(const Grid& grid, double sigma, const BumpSpec& bump,
                                 MollifyOptions opts = {});

/// True if f(-z) == f(z) on the grid to within tol.
bool is_even(const ScalarField& f, double tol = 0.0);

}  // namespace vortgrad
