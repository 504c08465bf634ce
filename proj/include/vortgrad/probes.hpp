#pragma once

#include <string>
#include <vector>

#include "vortgrad/field.hpp"
#include "vortgrad/fits.hpp"
#include "vortgrad/initial_data.hpp"
#include "vortgrad/series.hpp"

namespace vortgrad {

struct PerturbationBoundsReport {
  std::vector<double> radii;
  /// sup over |z| = r of |F1(z)| / r, one per radius.
  std::vector<double> sup_over_r;
  /// Same, over circle points at least eps1 from every arm; NaN if none.
  std::vector<double> sup_over_r_off_arms;
  double f1_origin = 0.0;   ///< |F1| at the grid point at the origin
  double f1_max = 0.0;      ///< sup over the grid of |F1|
  double hessian_sup = 0.0; ///< sup |H Delta^{-1} p|
  double leak = 0.0;        ///< sup |p| farther than arm_width from every arm
  /// tau |log tau| / eps1 and eps1^{-2} tau, the shapes of the stated bounds.
  double f1_scale = 0.0;
  double hessian_scale = 0.0;
};

/// F1 = grad Delta^{-1} p computed spectrally; circle sups by periodic
/// bilinear interpolation at `angles` points. Throws InvalidInput if p
/// exceeds leak_tol farther than arm_width from the arms.
PerturbationBoundsReport perturbation_field_bounds(const ScalarField& p, double eps1,
                                                   const std::vector<double>& radii,
                                                   double arm_width, double leak_tol = 0.0,
                                                   std::size_t angles = 1440);

struct BumpScalingMember {
  BumpSpec spec;
  double omega = 0.0;    ///< ||b||_2
  double M = 0.0;        ///< ||grad b||_inf
  double hessian = 0.0;  ///< sup |H Delta^{-1} b|
};

struct BumpScalingResult {
  std::vector<BumpScalingMember> members;
  /// Regression of ln hessian on ln omega.
  RateFit fit;
  /// max over members of hessian / sqrt(M omega).
  double max_constant = 0.0;
};

/// base, then `halvings` members each with h1 and h2 divided by sqrt 2:
/// omega halves while M stays fixed.
std::vector<BumpSpec> halving_family(const BumpSpec& base, std::size_t halvings);

/// omega, M and Hessian sup of one realized bump.
BumpScalingMember measure_bump(const BumpSpec& spec, const Grid& grid, double min_cells = 8.0);
/// Regression over already measured members; needs >= 2.
BumpScalingResult fit_bump_scaling(std::vector<BumpScalingMember> members);

BumpScalingResult bump_hessian_scaling(const std::vector<BumpSpec>& family, const Grid& grid,
                                       double min_cells = 8.0);

struct GrowthRun {
  std::string label;
  double control = 0.0;  ///< family parameter, e.g. h2/h1
  DiagnosticSeries grad; ///< grad_sup_norm samples; the first is at t = 0
};

struct GrowthRow {
  std::string label;
  double control = 0.0;
  double grad0 = 0.0;
  double max_ratio = 0.0;
  double t_at_max = 0.0;
  /// Ratio strictly increasing over [0, initial_window].
  bool initially_increasing = false;
  /// Slope of ln ln grad over [0, t_at_max]; NaN if fewer than 5 samples.
  double lnln_slope = 0.0;
  DiagnosticSeries ratio{"ratio"};
};

struct GrowthProbe {
  std::vector<GrowthRow> rows;
  /// max_ratio nondecreasing when rows are ordered by control.
  bool max_ratio_nondecreasing = true;

  std::string to_csv() const;
};

GrowthProbe growth_ratio_probe(const std::vector<GrowthRun>& runs, double initial_window);

}  // namespace vortgrad
