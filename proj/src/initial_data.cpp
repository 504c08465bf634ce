#include "vortgrad/initial_data.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortgrad/error.hpp"
#include "vortgrad/model_ode.hpp"
#include "vortgrad/series.hpp"
#include "vortgrad/spectral.hpp"

namespace vortgrad {

namespace {

using Quadrature = boost::math::quadrature::tanh_sinh<double>;
constexpr double kQuadTol = 1e-14;

// Abscissa tables are built lazily and are not thread safe; one per thread.
template <class F>
double integrate(F f, double a, double b) {
  thread_local Quadrature q;
  return q.integrate(f, a, b, kQuadTol);
}

double profile_unnormalized(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

int arm_sign(const Grid& grid, std::size_t i) {
  if (i == 0 || 2 * i == grid.n()) return 0;
  return 2 * i < grid.n() ? 1 : -1;
}

}  // namespace

ScalarField singular_cross(const Grid& grid) {
  ScalarField out(grid);
  auto v = out.mutable_values();
  for (std::size_t iy = 0; iy < grid.n(); ++iy)
    for (std::size_t ix = 0; ix < grid.n(); ++ix)
      v[grid.offset(ix, iy)] = arm_sign(grid, ix) * arm_sign(grid, iy);
  return out;
}

Mollifier::Mollifier() {
  normalization_ = kTwoPi * integrate([](double r) { return r * profile_unnormalized(r); }, 0.0, 1.0);
}

double Mollifier::density(double r) const { return profile_unnormalized(r) / normalization_; }

// In polar form every needed probability is a 1D radial integral of
// omega(r) r times the angle of the circle of radius r inside the set.
double Mollifier::half_line_mass(double t) const {
  if (t >= 1.0) return 1.0;
  if (t <= 0.0) return 0.0;
  // P(a > t) = int_t^1 omega(r) r 2 acos(t / r) dr.
  const double tail = integrate(
      [&](double r) { return density(r) * r * 2.0 * std::acos(std::min(1.0, t / r)); }, t, 1.0);
  return 1.0 - 2.0 * tail;
}

double Mollifier::upper_corner_mass(double p, double q) const {
  // P(a > p, b > q) for p, q >= 0.
  const double r0 = std::hypot(p, q);
  if (r0 >= 1.0) return 0.0;
  auto f = [&](double r) {
    const double span = std::acos(std::min(1.0, p / r)) - std::asin(std::min(1.0, q / r));
    return span > 0.0 ? density(r) * r * span : 0.0;
  };
  return integrate(f, r0, 1.0);
}

double Mollifier::quadrant_expectation(double p, double q) const {
  if (p >= 1.0 && q >= 1.0) return 1.0;
  if (p >= 1.0) return half_line_mass(q);
  if (q >= 1.0) return half_line_mass(p);
  return half_line_mass(p) + half_line_mass(q) - 1.0 + 4.0 * upper_corner_mass(p, q);
}

double arm_distance(const Grid& grid, std::size_t i) {
  const std::size_t half = grid.n() / 2;
  const std::size_t to_zero = std::min(i, grid.n() - i);
  const std::size_t to_pi = i > half ? i - half : half - i;
  return static_cast<double>(std::min(to_zero, to_pi)) * grid.spacing();
}

ScalarField mollified_cross(const Grid& grid, double sigma, MollifyOptions opts) {
  if (!(sigma > 0.0 && sigma < 0.5))
    throw InvalidInput("mollifier width must lie in (0, 0.5), got " + std::to_string(sigma));
  if (sigma < opts.min_cells * grid.spacing()) {
    const double need = opts.min_cells * kTwoPi / sigma;
    std::size_t n = 16;
    while (static_cast<double>(n) < need) n *= 2;
    throw InvalidInput("mollifier width " + std::to_string(sigma) + " is under-resolved on n = " +
                       std::to_string(grid.n()) + "; requires n >= " + std::to_string(n));
  }
  const Mollifier kernel;
  const std::size_t n = grid.n();
  std::vector<double> scaled(n);
  std::vector<double> line(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = arm_distance(grid, i) / sigma;
    line[i] = scaled[i] >= 1.0 ? 1.0 : kernel.half_line_mass(scaled[i]);
  }
  ScalarField out(grid);
  auto v = out.mutable_values();
  for (std::size_t iy = 0; iy < n; ++iy) {
    const int sy = arm_sign(grid, iy);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const int sx = arm_sign(grid, ix);
      double mag;
      if (sx == 0 || sy == 0) {
        mag = 0.0;
      } else if (scaled[ix] >= 1.0 && scaled[iy] >= 1.0) {
        mag = 1.0;
      } else if (scaled[ix] >= 1.0) {
        mag = line[iy];
      } else if (scaled[iy] >= 1.0) {
        mag = line[ix];
      } else {
        mag = kernel.quadrant_expectation(scaled[ix], scaled[iy]);
      }
      v[grid.offset(ix, iy)] = sx * sy * mag;
    }
  }
  return out;
}

BumpSpec validate_bump(const Grid& grid, const BumpSpec& spec, double min_cells) {
  const double r = 0.5 * spec.support_diameter;
  if (!(spec.height > 0.0) || !(spec.support_diameter > 0.0))
    throw InvalidInput("bump height and support diameter must be positive");
  if (spec.support_diameter < min_cells * grid.spacing()) {
    const double need = min_cells * kTwoPi / spec.support_diameter;
    std::size_t n = 16;
    while (static_cast<double>(n) < need) n *= 2;
    std::ostringstream os;
    os << "bump support " << spec.support_diameter << " spans "
       << spec.support_diameter / grid.spacing() << " cells on n = " << grid.n()
       << "; resolving it with " << min_cells << " cells requires n >= " << n;
    throw InvalidInput(os.str());
  }
  const double pi = kTwoPi / 2;
  if (spec.center_x - r <= 0.0 || spec.center_y - r <= 0.0 || spec.center_x + r >= pi ||
      spec.center_y + r >= pi)
    throw InvalidInput("bump support must lie in the open first quadrant (0, pi)^2");
  return spec;
}

ScalarField make_bump(const Grid& grid, const BumpSpec& spec, double min_cells) {
  validate_bump(grid, spec, min_cells);
  const double radius = 0.5 * spec.support_diameter;
  const double h = grid.spacing();
  const std::size_t n = grid.n();
  const auto lo_x = static_cast<std::size_t>(std::floor((spec.center_x - radius) / h));
  const auto hi_x = static_cast<std::size_t>(std::ceil((spec.center_x + radius) / h));
  const auto lo_y = static_cast<std::size_t>(std::floor((spec.center_y - radius) / h));
  const auto hi_y = static_cast<std::size_t>(std::ceil((spec.center_y + radius) / h));

  auto scaled_radius = [&](std::size_t ix, std::size_t iy) {
    return std::hypot(grid.coord(ix) - spec.center_x, grid.coord(iy) - spec.center_y) / radius;
  };
  auto envelope = [](double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; };

  // Pick the ring weight so the copy sums to zero on this grid.
  double s0 = 0.0, s2 = 0.0;
  for (std::size_t iy = lo_y; iy <= hi_y; ++iy)
    for (std::size_t ix = lo_x; ix <= hi_x; ++ix) {
      const double s = scaled_radius(ix, iy);
      const double e = envelope(s);
      s0 += e;
      s2 += s * s * e;
    }
  if (!(s2 > 0.0))
    throw InvalidInput("bump support of diameter " + format_g17(spec.support_diameter) +
                       " contains no grid point off its centre");
  const double ring = s0 / s2;

  std::vector<double> copy(grid.size(), 0.0);
  for (std::size_t iy = lo_y; iy <= hi_y; ++iy)
    for (std::size_t ix = lo_x; ix <= hi_x; ++ix) {
      const double s = scaled_radius(ix, iy);
      copy[grid.offset(ix, iy)] = spec.height * (1.0 - ring * s * s) * envelope(s);
    }
  ScalarField out(grid);
  auto v = out.mutable_values();
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix)
      v[grid.offset(ix, iy)] =
          copy[grid.offset(ix, iy)] + copy[grid.offset(grid.mirror(ix), grid.mirror(iy))];
  return out;
}

ScalarField make_bump(const Grid& grid, const BumpSpec& spec, const ParameterLadder& ladder) {
  if (const auto violated = omega0_violation(spec.center_x, spec.center_y, ladder))
    throw ConstraintViolation(*violated, "bump centre is outside Omega_0");
  return make_bump(grid, spec);
}

void require_desk_placement(const BumpSpec& spec, double sigma) {
  const double r = 0.5 * spec.support_diameter;
  if (spec.center_x - r <= sigma || spec.center_y - r <= sigma)
    throw ConstraintViolation("clear-of-arms", "bump support overlaps the mollified cross arms");
  if (!(spec.center_y > spec.center_x))
    throw ConstraintViolation("contracting-sector", "bump centre must satisfy y > x");
}

ScalarField compose_initial_data(const Grid& grid, double sigma, const BumpSpec& bump,
                                 MollifyOptions opts) {
  ScalarField out = mollified_cross(grid, sigma, opts);
  out += make_bump(grid, bump, opts.min_cells);
  const double sup = out.sup_abs();
  if (!(sup < 2.0))
    throw ConstraintViolation("sup-norm-below-two",
                              "||theta_0||_inf = " + std::to_string(sup) + " is not below 2");
  return out;
}

bool is_even(const ScalarField& f, double tol) {
  const Grid& g = f.grid();
  for (std::size_t iy = 0; iy < g.n(); ++iy)
    for (std::size_t ix = 0; ix < g.n(); ++ix)
      if (std::abs(f(ix, iy) - f(g.mirror(ix), g.mirror(iy))) > tol) return false;
  return true;
}

}  // namespace vortgrad
