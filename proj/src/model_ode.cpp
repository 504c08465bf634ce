#include "vortgrad/model_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vortgrad/error.hpp"

namespace vortgrad {

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22, a21 * o.a11 + a22 * o.a21,
          a21 * o.a12 + a22 * o.a22};
}
Mat2 Mat2::operator+(const Mat2& o) const {
  return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
}
Mat2 Mat2::operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

VariantKind parse_variant(const std::string& s) {
  if (s == "exact") return VariantKind::Exact;
  if (s == "leading") return VariantKind::Leading;
  throw InvalidInput("variant must be 'exact' or 'leading', got '" + s + "'");
}

std::string to_string(VariantKind kind) { return kind == VariantKind::Exact ? "exact" : "leading"; }

namespace {

void require_off_axis(double x, double y) {
  if (!(x >= kAxisGuard && y >= kAxisGuard) || !std::isfinite(x) || !std::isfinite(y)) {
    std::ostringstream os;
    os << "cross field evaluated at (" << x << ", " << y
       << "), inside the axis guard band or outside the first quadrant";
    throw InvalidInput(os.str());
  }
}

// ln(x^2 + y^2) without underflow for tiny arguments.
double log_r2(double x, double y) { return 2.0 * std::log(std::hypot(x, y)); }

}  // namespace

Vec2 cross_velocity(double x, double y, const CrossFieldVariant& v) {
  require_off_axis(x, y);
  if (v.kind == VariantKind::Leading) {
    const double ly = std::log(y);
    return {-v.c2 * x * ly, v.c2 * y * ly};
  }
  const double l = log_r2(x, y);
  return {-v.c1 * (x * l - 2.0 * x + 2.0 * y * std::atan(x / y)),
          v.c1 * (y * l - 2.0 * y + 2.0 * x * std::atan(y / x))};
}

Mat2 cross_jacobian(double x, double y, const CrossFieldVariant& v) {
  require_off_axis(x, y);
  if (v.kind == VariantKind::Leading) {
    const double ly = std::log(y);
    return {-v.c2 * ly, -v.c2 * x / y, 0.0, v.c2 * (ly + 1.0)};
  }
  const double l = log_r2(x, y);
  return {-v.c1 * l, -2.0 * v.c1 * std::atan(x / y), 2.0 * v.c1 * std::atan(y / x), v.c1 * l};
}

AlephRegion AlephRegion::from_ladder(const ParameterLadder& ladder) {
  return {ladder.eps1(), ladder.eps2()};
}

Vec2 Perturbation::value(double x, double y, double t) const {
  if (!nu) return {};
  return nu(x, y, t);
}

Mat2 Perturbation::gradient(double x, double y, double t) const {
  if (!nu) return {};
  const double hx = 1e-4 * x;
  const double hy = 1e-4 * y;
  const Vec2 xp = nu(x + hx, y, t), xm = nu(x - hx, y, t);
  const Vec2 yp = nu(x, y + hy, t), ym = nu(x, y - hy, t);
  return {(xp.x - xm.x) / (2 * hx), (yp.x - ym.x) / (2 * hy), (xp.y - xm.y) / (2 * hx),
          (yp.y - ym.y) / (2 * hy)};
}

AdmissibilityReport admissible_perturbation_check(const Perturbation& nu,
                                                  const AlephRegion& region,
                                                  std::size_t samples, double t_max,
                                                  std::uint64_t seed) {
  if (samples < 100) throw InvalidInput("admissibility check needs at least 100 samples");
  if (!(region.eps1 > 0.0 && region.eps2 < 1.0 && region.eps1 < region.eps2 * region.eps2))
    throw InvalidInput("admissibility check needs a nonempty region");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  AdmissibilityReport rep;
  rep.samples = samples;
  rep.value_margin = kInf;
  rep.gradient_margin = kInf;
  if (nu.is_zero()) return rep;

  const double bound_scale = 1e-4 * nu.upsilon;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Log-uniform in y over (sqrt(eps1), eps2), then in x over (eps1, y^2).
  const double ly0 = 0.5 * std::log(region.eps1), ly1 = std::log(region.eps2);
  for (std::size_t i = 0; i < samples; ++i) {
    const double y = std::exp(ly0 + (ly1 - ly0) * (0.02 + 0.96 * unit(rng)));
    const double lx0 = std::log(region.eps1), lx1 = std::log(y * y);
    const double x = std::exp(lx0 + (lx1 - lx0) * (0.02 + 0.96 * unit(rng)));
    const double t = t_max * unit(rng);
    const double r = std::hypot(x, y);
    const Vec2 val = nu.value(x, y, t);
    const double vmax = std::max(std::abs(val.x), std::abs(val.y));
    if (vmax > 0.0) {
      const double m = bound_scale * r / vmax;
      if (m < rep.value_margin) {
        rep.value_margin = m;
        rep.value_witness = {x, y};
        rep.value_witness_t = t;
      }
    }
    const Mat2 g = nu.gradient(x, y, t);
    const double gmax = std::max(std::hypot(g.a11, g.a12), std::hypot(g.a21, g.a22));
    if (gmax > 0.0) {
      const double m = bound_scale / gmax;
      if (m < rep.gradient_margin) {
        rep.gradient_margin = m;
        rep.gradient_witness = {x, y};
        rep.gradient_witness_t = t;
      }
    }
  }
  if (!(rep.value_margin > 1.0)) {
    rep.pass = false;
    rep.violated = "|nu| < 1e-4 upsilon r";
  } else if (!(rep.gradient_margin > 1.0)) {
    rep.pass = false;
    rep.violated = "|grad nu| < 1e-4 upsilon";
  }
  return rep;
}

std::string Trajectory::to_csv() const {
  std::string out = "t,x,y,xa,ya,xb,yb,detJ\n";
  for (const auto& s : path) {
    out += format_g17(s.t) + ',' + format_g17(s.x) + ',' + format_g17(s.y);
    if (s.jac) {
      const Mat2& J = *s.jac;
      out += ',' + format_g17(J.a11) + ',' + format_g17(J.a21) + ',' + format_g17(J.a12) + ',' +
             format_g17(J.a22) + ',' + format_g17(J.det());
    } else {
      out += ",,,,,";
    }
    out += '\n';
  }
  return out;
}

namespace {

struct OdeState {
  double x, y;
  Mat2 J;
};

OdeState axpy(const OdeState& s, double h, const OdeState& k) {
  return {s.x + h * k.x, s.y + h * k.y, s.J + k.J * h};
}

Trajectory integrate(Vec2 p0, double T, const Perturbation& nu, const CrossFieldVariant& variant,
                     const AlephRegion& region, const TrajectoryOptions& opts, bool variational) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidInput("integration time must be >= 0");
  if (!(opts.dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!region.contains(p0.x, p0.y)) {
    std::ostringstream os;
    os << "initial point (" << p0.x << ", " << p0.y << ") is not strictly inside the region";
    throw InvalidInput(os.str());
  }
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);

  double t = 0.0;
  auto rhs = [&](const OdeState& s, double tt) {
    if (!(s.x >= kAxisGuard && s.y >= kAxisGuard) || !std::isfinite(s.x) ||
        !std::isfinite(s.y))
      throw BlowUp(tt, "trajectory reached the axis guard band");
    const Vec2 m = cross_velocity(s.x, s.y, variant);
    const Vec2 n = nu.value(s.x, s.y, tt);
    OdeState d{m.x + n.x, m.y + n.y, {}};
    if (variational) {
      Mat2 A = cross_jacobian(s.x, s.y, variant);
      if (!nu.is_zero()) A = A + nu.gradient(s.x, s.y, tt);
      d.J = A * s.J;
    }
    return d;
  };

  Trajectory out;
  OdeState s{p0.x, p0.y, Mat2::identity()};
  auto record = [&] {
    PhaseState ps{t, s.x, s.y, std::nullopt};
    if (variational) ps.jac = s.J;
    out.path.push_back(ps);
  };
  record();
  std::size_t step = 0;
  while (t < T) {
    double h = opts.dt;
    bool last = false;
    if (t + h >= T) {
      h = T - t;
      last = true;
    }
    const OdeState k1 = rhs(s, t);
    const OdeState k2 = rhs(axpy(s, 0.5 * h, k1), t + 0.5 * h);
    const OdeState k3 = rhs(axpy(s, 0.5 * h, k2), t + 0.5 * h);
    const OdeState k4 = rhs(axpy(s, h, k3), t + h);
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    if (variational) s.J = s.J + (k1.J + k2.J * 2.0 + k3.J * 2.0 + k4.J) * (h / 6.0);
    t = last ? T : t + h;
    ++step;
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw BlowUp(t, "non-finite trajectory");
    const bool inside = region.contains(s.x, s.y);
    if (!inside && !out.exit_time) out.exit_time = t;
    if (last || step % every == 0 || (!inside && opts.stop_at_exit)) record();
    if (!inside && opts.stop_at_exit) break;
  }
  return out;
}

}  // namespace

Trajectory integrate_trajectory(Vec2 p0, double T, const Perturbation& nu,
                                const CrossFieldVariant& variant, const AlephRegion& region,
                                const TrajectoryOptions& opts) {
  return integrate(p0, T, nu, variant, region, opts, false);
}

Trajectory integrate_variational(Vec2 p0, double T, const Perturbation& nu,
                                 const CrossFieldVariant& variant, const AlephRegion& region,
                                 const TrajectoryOptions& opts) {
  return integrate(p0, T, nu, variant, region, opts, true);
}

double log_kappa(double T, double beta, double C) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("kappa needs 0 < beta < 1");
  return std::exp(T) * (std::log(beta) - C);
}

double kappa(double T, double beta, double C) { return std::exp(log_kappa(T, beta, C)); }

std::optional<std::string> omega0_violation(double alpha, double beta,
                                            const ParameterLadder& ladder) {
  if (!(alpha > 0.0) || !(beta > 0.0)) return "positive-coordinates";
  const double la = std::log10(alpha), lb = std::log10(beta);
  if (!(lb < ladder.log10_eps2)) return "beta-below-eps2";
  if (!(la > ladder.log10_eps1)) return "alpha-above-eps1";
  if (!(la < ladder.omega_exponent * lb)) return "alpha-below-beta-power";
  return std::nullopt;
}

bool omega0_contains(double alpha, double beta, const ParameterLadder& ladder) {
  return !omega0_violation(alpha, beta, ladder);
}

ErrorBoundFit leading_error_bound(const Trajectory& path, const CrossFieldVariant& variant,
                                  const AlephRegion& region, const Perturbation& nu) {
  ErrorBoundFit fit;
  const double k = variant.leading_coefficient();
  for (const auto& s : path.path) {
    if (!region.contains(s.x, s.y)) continue;
    const Vec2 m = cross_velocity(s.x, s.y, variant);
    const Vec2 n = nu.value(s.x, s.y, s.t);
    const double xdot = m.x + n.x, ydot = m.y + n.y;
    const double ly = std::log(s.y);
    // xdot lies in x(-k ln y) +- (C x + ups y); ydot in y k ln y +- C y.
    const double cx = std::max(0.0, (std::abs(xdot + k * s.x * ly) - nu.upsilon * s.y) / s.x);
    const double cy = std::abs(ydot / s.y - k * ly);
    const double c = std::max(cx, cy);
    fit.per_sample.push(s.t, c);
    fit.fitted_C = std::max(fit.fitted_C, c);
    ++fit.samples_used;
  }
  return fit;
}

}  // namespace vortgrad
