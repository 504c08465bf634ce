#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vortgrad/ladder.hpp"
#include "vortgrad/series.hpp"

namespace vortgrad {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator*(double s) const;
};

enum class VariantKind { Exact, Leading };

/// Velocity of the singular cross near the origin. Exact: closed-form
/// antiderivatives, divergence free. Leading: c2 (-x ln y, y ln y),
/// divergence c2.
struct CrossFieldVariant {
  VariantKind kind = VariantKind::Exact;
  double c1 = 0.5;
  double c2 = 1.0;

  /// Coefficient of the leading -x ln y term: 2 c1 or c2.
  double leading_coefficient() const { return kind == VariantKind::Exact ? 2.0 * c1 : c2; }
};

VariantKind parse_variant(const std::string& s);
std::string to_string(VariantKind kind);

/// Points closer than this to an axis are rejected. The field formulas stay
/// finite far below it; double-exponential paths need the room.
inline constexpr double kAxisGuard = 1e-290;

/// Throws InvalidInput unless x, y >= kAxisGuard.
Vec2 cross_velocity(double x, double y, const CrossFieldVariant& variant);
/// d(u, v)/d(x, y), analytic.
Mat2 cross_jacobian(double x, double y, const CrossFieldVariant& variant);

/// {y > sqrt(x), y < eps2, x > eps1}.
struct AlephRegion {
  double eps1 = 0.0;
  double eps2 = 0.0;

  bool contains(double x, double y) const { return y * y > x && y < eps2 && x > eps1; }
  static AlephRegion from_ladder(const ParameterLadder& ladder);
};

/// Additive perturbation (nu1, nu2)(x, y, t) with its admissibility scale upsilon.
struct Perturbation {
  std::function<Vec2(double x, double y, double t)> nu;
  double upsilon = 0.0;

  bool is_zero() const { return !nu; }
  Vec2 value(double x, double y, double t) const;
  /// Central-difference gradient: rows are components, columns d/dx, d/dy.
  Mat2 gradient(double x, double y, double t) const;
};

struct AdmissibilityReport {
  bool pass = true;
  std::size_t samples = 0;
  /// min over samples of bound / |nu_i|; infinity if nu vanishes.
  double value_margin = 0.0;
  double gradient_margin = 0.0;
  Vec2 value_witness;
  double value_witness_t = 0.0;
  Vec2 gradient_witness;
  double gradient_witness_t = 0.0;
  /// Name of the failed bound, empty on pass.
  std::string violated;
};

/// Samples `samples` (point, time) pairs in region x [0, t_max] and checks
/// |nu_i| < 1e-4 upsilon r and |grad nu_i| < 1e-4 upsilon.
AdmissibilityReport admissible_perturbation_check(const Perturbation& nu,
                                                  const AlephRegion& region,
                                                  std::size_t samples, double t_max = 1.0,
                                                  std::uint64_t seed = 1);

struct PhaseState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  /// d(x, y)/d(alpha, beta) when the variational system is integrated.
  std::optional<Mat2> jac;
};

struct TrajectoryOptions {
  double dt = 1e-4;
  std::size_t record_every = 1;
  bool stop_at_exit = false;
};

struct Trajectory {
  std::vector<PhaseState> path;
  std::optional<double> exit_time;  ///< first sampled time outside the region

  const PhaseState& final_state() const { return path.back(); }
  /// CSV t,x,y,xa,ya,xb,yb,detJ (Jacobian columns empty if absent).
  std::string to_csv() const;
};

/// RK4 for xdot = mu + nu starting from (alpha, beta) strictly inside region.
/// Throws InvalidInput if p0 is outside the region and BlowUp if the path
/// reaches the axis guard band.
Trajectory integrate_trajectory(Vec2 p0, double T, const Perturbation& nu,
                                const CrossFieldVariant& variant, const AlephRegion& region,
                                const TrajectoryOptions& opts = {});

/// As integrate_trajectory, co-integrating J' = (D mu + D nu) J, J(0) = I.
Trajectory integrate_variational(Vec2 p0, double T, const Perturbation& nu,
                                 const CrossFieldVariant& variant, const AlephRegion& region,
                                 const TrajectoryOptions& opts = {});

/// kappa(T, beta) = exp(e^T (ln beta - C)).
double kappa(double T, double beta, double C);
/// Natural log of kappa.
double log_kappa(double T, double beta, double C);

/// Name of the first violated inequality of
/// {eps1 < alpha < beta^p, 0 < beta < eps2}, or nullopt if (alpha, beta) is in Omega_0.
std::optional<std::string> omega0_violation(double alpha, double beta,
                                            const ParameterLadder& ladder);
bool omega0_contains(double alpha, double beta, const ParameterLadder& ladder);

struct ErrorBoundFit {
  /// Per-sample minimal C, over samples inside the region only.
  DiagnosticSeries per_sample{"min_C"};
  double fitted_C = 0.0;
  std::size_t samples_used = 0;
};

/// Smallest C with x(-k ln y - C) - ups y < xdot < x(-k ln y + C) + ups y and
/// -y(k|ln y| + C) < ydot < -y(k|ln y| - C) at every path sample inside `region`;
/// k is the variant's leading coefficient.
ErrorBoundFit leading_error_bound(const Trajectory& path, const CrossFieldVariant& variant,
                                  const AlephRegion& region, const Perturbation& nu = {});

}  // namespace vortgrad
