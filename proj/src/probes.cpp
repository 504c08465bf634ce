#include "vortgrad/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vortgrad/error.hpp"
#include "vortgrad/polyline.hpp"
#include "vortgrad/spectral.hpp"

namespace vortgrad {

namespace {

// Distance from coordinate c to the nearest multiple of pi.
double distance_to_arms(double c) {
  const double pi = std::numbers::pi;
  const double m = std::fmod(std::abs(c), pi);
  return std::min(m, pi - m);
}

}  // namespace

PerturbationBoundsReport perturbation_field_bounds(const ScalarField& p, double eps1,
                                                   const std::vector<double>& radii,
                                                   double arm_width, double leak_tol,
                                                   std::size_t angles) {
  if (!(eps1 > 0.0)) throw InvalidInput("eps1 must be positive");
  if (!p.all_finite()) throw InvalidInput("perturbation has non-finite samples");
  if (!has_zero_mean(p)) throw InvalidInput("perturbation must have zero mean");
  const Grid& g = p.grid();
  PerturbationBoundsReport rep;
  for (std::size_t iy = 0; iy < g.n(); ++iy)
    for (std::size_t ix = 0; ix < g.n(); ++ix)
      if (arm_distance(g, ix) > arm_width && arm_distance(g, iy) > arm_width)
        rep.leak = std::max(rep.leak, std::abs(p(ix, iy)));
  if (rep.leak > leak_tol)
    throw InvalidInput("perturbation leaks outside the arm set: sup " + format_g17(rep.leak));

  const SpectralOps& ops = spectral_ops(g);
  const VelocityField F = ops.gradient(ops.inverse_laplacian(ops.forward(p)));
  for (std::size_t i = 0; i < g.size(); ++i)
    rep.f1_max = std::max(rep.f1_max, std::hypot(F.u.values()[i], F.v.values()[i]));
  rep.f1_origin = std::hypot(F.u(0, 0), F.v(0, 0));
  for (double r : radii) {
    if (!(r > 0.0)) throw InvalidInput("radii must be positive");
    double sup = 0.0;
    double off = -1.0;
    for (std::size_t k = 0; k < angles; ++k) {
      const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(angles);
      const double x = r * std::cos(phi), y = r * std::sin(phi);
      const double f = std::hypot(bilinear(F.u, x, y), bilinear(F.v, x, y));
      sup = std::max(sup, f);
      if (distance_to_arms(x) >= eps1 && distance_to_arms(y) >= eps1) off = std::max(off, f);
    }
    rep.radii.push_back(r);
    rep.sup_over_r.push_back(sup / r);
    rep.sup_over_r_off_arms.push_back(off < 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                                : off / r);
  }
  rep.hessian_sup = hessian_sup_of_inverse_laplacian(p);
  if (arm_width > 0.0) {
    rep.f1_scale = arm_width * std::abs(std::log(arm_width)) / eps1;
    rep.hessian_scale = arm_width / (eps1 * eps1);
  }
  return rep;
}

std::vector<BumpSpec> halving_family(const BumpSpec& base, std::size_t halvings) {
  std::vector<BumpSpec> out{base};
  for (std::size_t i = 0; i < halvings; ++i) {
    BumpSpec s = out.back();
    s.support_diameter /= std::numbers::sqrt2;
    s.height /= std::numbers::sqrt2;
    out.push_back(s);
  }
  return out;
}

BumpScalingMember measure_bump(const BumpSpec& spec, const Grid& grid, double min_cells) {
  const ScalarField b = make_bump(grid, spec, min_cells);
  BumpScalingMember m{spec, 0.0, grad_sup_norm(b), hessian_sup_of_inverse_laplacian(b)};
  double s2 = 0.0;
  for (double v : b.values()) s2 += v * v;
  m.omega = std::sqrt(s2 * grid.cell_area());
  return m;
}

BumpScalingResult fit_bump_scaling(std::vector<BumpScalingMember> members) {
  if (members.size() < 2) throw InvalidInput("bump scaling needs >= 2 members");
  BumpScalingResult res;
  std::vector<double> lw, lh;
  for (const auto& m : members) {
    res.max_constant = std::max(res.max_constant, m.hessian / std::sqrt(m.M * m.omega));
    lw.push_back(std::log(m.omega));
    lh.push_back(std::log(m.hessian));
  }
  res.fit = linear_fit(lw, lh);
  res.members = std::move(members);
  return res;
}

BumpScalingResult bump_hessian_scaling(const std::vector<BumpSpec>& family, const Grid& grid,
                                       double min_cells) {
  if (family.size() < 2) throw InvalidInput("bump scaling needs >= 2 members");
  std::vector<BumpScalingMember> members;
  for (const auto& spec : family) members.push_back(measure_bump(spec, grid, min_cells));
  return fit_bump_scaling(std::move(members));
}

GrowthProbe growth_ratio_probe(const std::vector<GrowthRun>& runs, double initial_window) {
  GrowthProbe probe;
  for (const auto& run : runs) {
    if (run.grad.empty()) throw InvalidInput("growth run '" + run.label + "' has no samples");
    GrowthRow row;
    row.label = run.label;
    row.control = run.control;
    row.grad0 = run.grad.front().value;
    if (!(row.grad0 > 0.0)) throw InvalidInput("growth run '" + run.label + "' starts at zero");
    row.max_ratio = -std::numeric_limits<double>::infinity();
    for (const auto& s : run.grad.samples()) {
      const double r = s.value / row.grad0;
      row.ratio.push(s.t, r);
      if (r > row.max_ratio) {
        row.max_ratio = r;
        row.t_at_max = s.t;
      }
    }
    const auto early = row.ratio.window(run.grad.front().t, run.grad.front().t + initial_window);
    row.initially_increasing = early.size() >= 2;
    for (std::size_t i = 1; i < early.size(); ++i)
      if (!(early.samples()[i].value > early.samples()[i - 1].value))
        row.initially_increasing = false;
    row.lnln_slope = std::numeric_limits<double>::quiet_NaN();
    const auto active = run.grad.window(run.grad.front().t, row.t_at_max);
    if (active.size() >= 5 && row.grad0 > 1.0)
      row.lnln_slope = fit_double_exponential(active, active.front().t, active.back().t,
                                              FitDirection::Growth)
                           .slope;
    probe.rows.push_back(std::move(row));
  }
  std::stable_sort(probe.rows.begin(), probe.rows.end(),
                   [](const GrowthRow& a, const GrowthRow& b) { return a.control < b.control; });
  for (std::size_t i = 1; i < probe.rows.size(); ++i)
    if (probe.rows[i].max_ratio < probe.rows[i - 1].max_ratio) probe.max_ratio_nondecreasing = false;
  return probe;
}

std::string GrowthProbe::to_csv() const {
  std::string out = "label,control,grad0,max_ratio,t_at_max,initially_increasing,lnln_slope\n";
  for (const auto& r : rows)
    out += r.label + ',' + format_g17(r.control) + ',' + format_g17(r.grad0) + ',' +
           format_g17(r.max_ratio) + ',' + format_g17(r.t_at_max) + ',' +
           (r.initially_increasing ? "1" : "0") + ',' + format_g17(r.lnln_slope) + '\n';
  return out;
}

}  // namespace vortgrad
