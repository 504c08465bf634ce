#include "vortgrad/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vortgrad/error.hpp"
#include "vortgrad/series.hpp"

namespace vortgrad {

namespace {

// Every inequality is enforced with one decade of room.
constexpr double kSlack = 1.0;
// Faithful choices add this so the recomputed slack cannot round to just
// under one decade.
constexpr double kRoundoff = 1e-9;
// Relaxed values are clamped from below at 1e-8.
constexpr double kRelaxedFloor = -8.0;
// Relaxed regime: Omega_0 must contain alpha > eps1 with eps1 >= 1e-7.
constexpr double kRelaxedOmegaFloor = -6.0;

double log10_abs_ln(double log10_x) { return std::log10(std::abs(log10_x * std::numbers::ln10)); }

// Solves log10(tau) + log10|ln tau| = target for tau < 1/e.
double solve_tau(double target) {
  double l = target;
  for (int i = 0; i < 200; ++i) {
    const double next = target - log10_abs_ln(l);
    if (std::abs(next - l) < 1e-14 * std::max(1.0, std::abs(l))) return next;
    l = next;
  }
  return l;
}

std::string fmt(double v) { return format_g17(v); }

}  // namespace

double faithful_omega_exponent(double T) { return 8.0 * std::exp(2.0 * T); }

bool ParameterLadder::all_satisfied() const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const LadderConstraint& c) { return c.satisfied(); });
}

const LadderConstraint& ParameterLadder::constraint(const std::string& name) const {
  for (const auto& c : constraints)
    if (c.name == name) return c;
  throw InvalidInput("no ladder constraint named '" + name + "'");
}

double ParameterLadder::eps2() const { return std::pow(10.0, log10_eps2); }
double ParameterLadder::eps1() const { return std::pow(10.0, log10_eps1); }
double ParameterLadder::upsilon() const { return std::pow(10.0, log10_upsilon); }
double ParameterLadder::tau() const { return std::pow(10.0, log10_tau); }
double ParameterLadder::sigma() const { return std::pow(10.0, log10_sigma); }

std::string ParameterLadder::to_text() const {
  std::ostringstream os;
  os << "mode = " << to_string(mode) << '\n'
     << "T = " << fmt(T) << '\n'
     << "lambda = " << fmt(lambda) << '\n'
     << "omega_exponent = " << fmt(omega_exponent) << '\n'
     << "log10_eps2 = " << fmt(log10_eps2) << '\n'
     << "log10_eps1 = " << fmt(log10_eps1) << '\n'
     << "log10_upsilon = " << fmt(log10_upsilon) << '\n'
     << "log10_tau = " << fmt(log10_tau) << '\n'
     << "log10_sigma = " << fmt(log10_sigma) << '\n';
  for (const auto& c : constraints)
    os << "constraint." << c.name << ".slack_decades = " << fmt(c.slack_decades()) << '\n'
       << "constraint." << c.name << ".satisfied = " << (c.satisfied() ? "true" : "false")
       << '\n';
  for (std::size_t i = 0; i < notes.size(); ++i) os << "note." << i << " = " << notes[i] << '\n';
  return os.str();
}

ParameterLadder resolve_ladder(double T, double lambda, LadderMode mode,
                               const LadderOverrides& overrides) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("ladder needs T > 0");
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InvalidInput("ladder needs lambda > 1");
  auto check_unit = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0 && *v < 1.0))
      throw InvalidInput(std::string("override ") + name + " must lie in (0, 1)");
  };
  check_unit(overrides.eps2, "eps2");
  check_unit(overrides.eps1, "eps1");
  check_unit(overrides.upsilon, "upsilon");
  check_unit(overrides.tau, "tau");
  check_unit(overrides.sigma, "sigma");

  ParameterLadder L;
  L.T = T;
  L.lambda = lambda;
  L.mode = mode;
  const bool relaxed = mode == LadderMode::Relaxed;

  // eps2: growth by lambda^{e^T - 1} needs beta^{-(e^T-1)/2} > lambda^{e^T-1}.
  double le2 = std::log10(0.1) - 2.0 * std::log10(lambda);
  if (relaxed) {
    L.omega_exponent = 3.0 * std::exp(T) + 3.0;
    le2 = std::min(le2, std::log10(0.05));
    if (L.omega_exponent * le2 < kRelaxedOmegaFloor) {
      le2 = kRelaxedOmegaFloor / L.omega_exponent;
      L.notes.push_back("eps2 raised so that eps2^p >= 1e-6; growth target lambda not guaranteed");
    }
    L.notes.push_back("relaxed regime: not faithful to the theorem's constants");
  } else {
    L.omega_exponent = faithful_omega_exponent(T);
  }
  if (overrides.eps2) le2 = std::log10(*overrides.eps2);
  L.log10_eps2 = le2;

  const double le1_cap = L.omega_exponent * le2;
  const double room = relaxed ? kSlack : kSlack + kRoundoff;
  L.log10_eps1 = overrides.eps1 ? std::log10(*overrides.eps1) : le1_cap - room;
  const double le1 = L.log10_eps1;

  const double drift_rhs = le1 + log10_abs_ln(le2) - le2;
  const double size_rhs = 10.0 * le1;
  const double horizon_rhs = -std::log10(T + 1.0);
  double lu = std::min({drift_rhs, size_rhs, horizon_rhs}) - room;
  double lt = solve_tau(12.0 * le1 - room);
  double ls = std::min(le1, lt) - room;
  if (relaxed) {
    // floors stay below the inequalities that are linear in eps1
    lu = std::max(lu, std::min(kRelaxedFloor, drift_rhs - kSlack));
    lt = std::max(lt, kRelaxedFloor);
    ls = std::max(ls, std::min(kRelaxedFloor, le1 - kSlack));
  }
  if (overrides.upsilon) lu = std::log10(*overrides.upsilon);
  if (overrides.tau) lt = std::log10(*overrides.tau);
  if (overrides.sigma) ls = std::log10(*overrides.sigma);
  L.log10_upsilon = lu;
  L.log10_tau = lt;
  L.log10_sigma = ls;

  L.constraints = {
      {"confinement", "eps1 < eps2^p (Omega_0 nonempty)", le1, le1_cap},
      {"drift-monotonicity", "upsilon <~ eps1 |log eps2| / eps2", lu, drift_rhs},
      {"perturbation-size", "upsilon < eps1^10", lu, size_rhs},
      {"time-horizon", "upsilon << 1 / (T + 1)", lu, horizon_rhs},
      {"cross-width", "eps1^-2 tau |log tau| <~ eps1^10", -2.0 * le1 + lt + log10_abs_ln(lt),
       size_rhs},
      {"mollifier-width", "sigma << eps1", ls, le1},
      {"eps2-below-one", "eps2 < 1", le2, 0.0},
  };

  const bool any_override = overrides.eps2 || overrides.eps1 || overrides.upsilon ||
                            overrides.tau || overrides.sigma;
  if (any_override) {
    // Relaxed floors already break some inequalities; an override is only
    // refused for the ones it breaks itself.
    const ParameterLadder base = resolve_ladder(T, lambda, mode);
    for (std::size_t i = 0; i < L.constraints.size(); ++i) {
      const auto& c = L.constraints[i];
      if (!c.satisfied() && base.constraints[i].satisfied())
        throw ConstraintViolation(c.name, "override breaks '" + c.statement + "' (lhs log10 " +
                                              fmt(c.lhs_log10) + " > rhs log10 " +
                                              fmt(c.rhs_log10) + ")");
    }
  }
  return L;
}

LadderMode parse_ladder_mode(const std::string& s) {
  if (s == "faithful") return LadderMode::Faithful;
  if (s == "relaxed") return LadderMode::Relaxed;
  throw InvalidInput("ladder mode must be 'faithful' or 'relaxed', got '" + s + "'");
}

std::string to_string(LadderMode mode) {
  return mode == LadderMode::Faithful ? "faithful" : "relaxed";
}

}  // namespace vortgrad
