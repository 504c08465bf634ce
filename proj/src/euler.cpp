#include "vortgrad/euler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vortgrad/error.hpp"
#include "vortgrad/spectral.hpp"

namespace vortgrad {

namespace {

class Rhs {
 public:
  Rhs(const SpectralOps& ops, double alpha) : ops_(ops), alpha_(alpha) {}

  /// -P(u . grad theta) with P the 2/3 truncation; also reports the max speed.
  Spectrum operator()(const Spectrum& theta_hat, double t, double* max_speed) const {
    const VelocityField vel = ops_.velocity(theta_hat, alpha_);
    const VelocityField grad = ops_.gradient(theta_hat);
    const Grid& g = ops_.grid();
    std::vector<double> prod(g.size());
    const auto u = vel.u.values(), v = vel.v.values();
    const auto tx = grad.u.values(), ty = grad.v.values();
    double speed2 = 0.0;
    for (std::size_t i = 0; i < prod.size(); ++i) {
      prod[i] = u[i] * tx[i] + v[i] * ty[i];
      speed2 = std::max(speed2, u[i] * u[i] + v[i] * v[i]);
      if (!std::isfinite(prod[i])) throw BlowUp(t, "advection term");
    }
    if (max_speed) *max_speed = std::sqrt(speed2);
    Spectrum out = ops_.forward(ScalarField(g, std::move(prod)));
    ops_.dealias(out);
    out[0] = Complex{};
    for (auto& c : out) c = -c;
    return out;
  }

 private:
  const SpectralOps& ops_;
  double alpha_;
};

Spectrum axpy(const Spectrum& x, double a, const Spectrum& k) {
  Spectrum out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
  return out;
}

/// Remaining RK4 stages given k1 at theta_hat.
Spectrum finish_rk4(const Rhs& rhs, const Spectrum& th, const Spectrum& k1, double t, double dt) {
  const Spectrum k2 = rhs(axpy(th, 0.5 * dt, k1), t + 0.5 * dt, nullptr);
  const Spectrum k3 = rhs(axpy(th, 0.5 * dt, k2), t + 0.5 * dt, nullptr);
  const Spectrum k4 = rhs(axpy(th, dt, k3), t + dt, nullptr);
  Spectrum out(th.size());
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < th.size(); ++i)
    out[i] = th[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  out[0] = th[0];
  return out;
}

void validate_state(const SimState& s) {
  if (!(s.alpha_exponent >= 1.0))
    throw InvalidInput("inversion exponent must be >= 1");
  if (!s.theta.all_finite()) throw BlowUp(s.time, "initial vorticity");
}

double admissible_dt(double spacing, double speed) {
  return speed > 0.0 ? kMaxCfl * spacing / speed : std::numeric_limits<double>::infinity();
}

}  // namespace

double cfl_limit(const SimState& state) {
  const auto& ops = spectral_ops(state.theta.grid());
  const VelocityField vel = ops.velocity(ops.forward(state.theta), state.alpha_exponent);
  return admissible_dt(state.theta.grid().spacing(), vel.max_speed());
}

SimState step_rk4(const SimState& state, double dt) {
  validate_state(state);
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  const auto& ops = spectral_ops(state.theta.grid());
  const Rhs rhs(ops, state.alpha_exponent);
  const Spectrum th = ops.forward(state.theta);
  double speed = 0.0;
  const Spectrum k1 = rhs(th, state.time, &speed);
  const double limit = admissible_dt(state.theta.grid().spacing(), speed);
  if (dt > limit) throw CflViolation(dt, limit);
  ScalarField next = ops.inverse(finish_rk4(rhs, th, k1, state.time, dt));
  if (!next.all_finite()) throw BlowUp(state.time + dt, "vorticity");
  return {std::move(next), state.time + dt, state.alpha_exponent};
}

Invariants conserved_quantities(const SimState& state) {
  const ScalarField& th = state.theta;
  const double da = th.grid().cell_area();
  Invariants inv;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (double v : th.values()) {
    const double a = std::abs(v);
    s1 += a;
    s2 += a * a;
    s4 += a * a * a * a;
    inv.linf = std::max(inv.linf, a);
  }
  inv.l1 = s1 * da;
  inv.l2 = std::sqrt(s2 * da);
  inv.l4 = std::pow(s4 * da, 0.25);
  inv.enstrophy = s2 * da;
  inv.mean = th.mean();
  const auto& ops = spectral_ops(th.grid());
  const VelocityField vel = ops.velocity(ops.forward(th), state.alpha_exponent);
  double e = 0.0;
  const auto u = vel.u.values(), v = vel.v.values();
  for (std::size_t i = 0; i < u.size(); ++i) e += u[i] * u[i] + v[i] * v[i];
  inv.energy = 0.5 * e * da;
  return inv;
}

std::vector<NamedDiagnostic> standard_diagnostics() {
  return {
      {"grad_sup", [](const SimState& s) { return grad_sup_norm(s.theta); }},
      {"h2", [](const SimState& s) { return h2_norm(s.theta); }},
      {"energy", [](const SimState& s) { return conserved_quantities(s).energy; }},
      {"enstrophy", [](const SimState& s) { return conserved_quantities(s).enstrophy; }},
      {"linf", [](const SimState& s) { return s.theta.sup_abs(); }},
      {"mean", [](const SimState& s) { return s.theta.mean(); }},
  };
}

DiagnosticTable run(SimState& state, const RunOptions& opts) {
  validate_state(state);
  std::vector<std::string> names;
  for (const auto& d : opts.diagnostics) names.push_back(d.name);
  DiagnosticTable table(names);
  if (opts.t_end == state.time) return table;
  if (!(opts.t_end > state.time)) throw InvalidInput("t_end must not precede the state time");
  if (!(opts.cfl > 0.0 && opts.cfl <= kMaxCfl))
    throw InvalidInput("cfl must lie in (0, " + format_g17(kMaxCfl) + "]");
  if (!(opts.sample_every > 0.0)) throw InvalidInput("sample_every must be positive");

  const auto& ops = spectral_ops(state.theta.grid());
  const Rhs rhs(ops, state.alpha_exponent);
  const double spacing = state.theta.grid().spacing();
  const double t0 = state.time;

  auto record = [&](const SimState& s) {
    std::vector<double> row;
    row.reserve(opts.diagnostics.size());
    for (const auto& d : opts.diagnostics) row.push_back(d.evaluate(s));
    table.add_row(s.time, row);
    if (opts.on_sample)
      opts.on_sample(s, ops.velocity(ops.forward(s.theta), s.alpha_exponent));
  };

  record(state);
  Spectrum th = ops.forward(state.theta);
  std::size_t k = 1;
  while (state.time < opts.t_end) {
    const double target = std::min(opts.t_end, t0 + static_cast<double>(k) * opts.sample_every);
    while (state.time < target) {
      double speed = 0.0;
      const Spectrum k1 = rhs(th, state.time, &speed);
      double dt = target - state.time;
      bool lands = true;
      if (speed > 0.0 && opts.cfl * spacing / speed < dt) {
        dt = opts.cfl * spacing / speed;
        lands = false;
      }
      th = finish_rk4(rhs, th, k1, state.time, dt);
      state.time = (lands || state.time + dt >= target) ? target : state.time + dt;
    }
    state.theta = ops.inverse(th);
    if (!state.theta.all_finite()) throw BlowUp(state.time, "vorticity");
    record(state);
    ++k;
  }
  return table;
}

}  // namespace vortgrad
