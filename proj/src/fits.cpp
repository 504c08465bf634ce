#include "vortgrad/fits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortgrad/error.hpp"

namespace vortgrad {

RateFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("linear fit needs >= 2 pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("linear fit needs distinct abscissae");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  f.t_min = *std::min_element(x.begin(), x.end());
  f.t_max = *std::max_element(x.begin(), x.end());
  f.samples = x.size();
  return f;
}

RateFit fit_double_exponential(const DiagnosticSeries& series, double t_min, double t_max,
                               FitDirection direction) {
  if (!(t_max > t_min)) throw InvalidInput("fit window must be nonempty");
  const DiagnosticSeries w = series.window(t_min, t_max);
  if (w.size() < 5) throw InvalidInput("double-exponential fit needs >= 5 samples in window");
  if (direction == FitDirection::Auto)
    direction = w.front().value < 1.0 ? FitDirection::Decay : FitDirection::Growth;
  std::vector<double> t, z;
  for (const auto& s : w.samples()) {
    const bool ok = direction == FitDirection::Decay ? (s.value > 0.0 && s.value < 1.0)
                                                     : s.value > 1.0;
    if (!ok) {
      std::ostringstream os;
      os << "sample (t = " << s.t << ", value = " << s.value << ") outside the admissible range of a "
         << (direction == FitDirection::Decay ? "decay (0, 1)" : "growth (1, inf)") << " fit";
      throw InvalidInput(os.str());
    }
    t.push_back(s.t);
    z.push_back(direction == FitDirection::Decay ? std::log(-std::log(s.value))
                                                 : std::log(std::log(s.value)));
  }
  return linear_fit(t, z);
}

EnvelopeKind parse_envelope_kind(const std::string& s) {
  if (s == "lipschitz") return EnvelopeKind::Lipschitz;
  if (s == "h2") return EnvelopeKind::H2;
  if (s == "exponential") return EnvelopeKind::Exponential;
  throw InvalidInput("envelope kind must be lipschitz, h2 or exponential, got '" + s + "'");
}

std::string to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::Lipschitz: return "lipschitz";
    case EnvelopeKind::H2: return "h2";
    case EnvelopeKind::Exponential: return "exponential";
  }
  return "?";
}

namespace {

double log_plus(double v) { return v > 1.0 ? std::log(v) : 0.0; }

// ln of the envelope at time t for constant C; increasing in C.
double log_envelope(EnvelopeKind kind, const EnvelopeBase& b, double C, double t) {
  switch (kind) {
    case EnvelopeKind::Lipschitz:
      return C * (1.0 + log_plus(b.norm0)) * std::exp(C * t);
    case EnvelopeKind::H2:
      return 0.5 * ((1.0 + 2.0 * log_plus(b.norm0)) * std::exp(C * b.sup_theta0 * t) - 1.0);
    case EnvelopeKind::Exponential:
      return std::log(b.norm0) + C * b.sup_theta0 * t;
  }
  return 0.0;
}

// Smallest C >= 0 with log_envelope(C, t) >= target, by bisection.
double minimal_C(EnvelopeKind kind, const EnvelopeBase& b, double t, double target) {
  if (log_envelope(kind, b, 0.0, t) >= target) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (log_envelope(kind, b, hi, t) < target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw InvalidInput("envelope cannot dominate sample; check base norms");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_envelope(kind, b, mid, t) >= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

EnvelopeResult envelope_check(const DiagnosticSeries& series, EnvelopeKind kind,
                              const EnvelopeBase& base) {
  DiagnosticSeries logs(series.name());
  for (const auto& s : series.samples()) {
    if (!(s.value > 0.0)) throw InvalidInput("envelope check needs a positive series");
    logs.push(s.t, std::log(s.value));
  }
  return envelope_check_log(logs, kind, base);
}

EnvelopeResult envelope_check_log(const DiagnosticSeries& log_series, EnvelopeKind kind,
                                  const EnvelopeBase& base) {
  if (!(base.norm0 > 0.0) || !(base.sup_theta0 > 0.0))
    throw InvalidInput("envelope base norms must be positive");
  EnvelopeResult r;
  for (const auto& s : log_series.samples()) {
    const double target = s.value;
    // An exponential envelope at t = 0 only needs g <= g0.
    if (kind != EnvelopeKind::Lipschitz && s.t == 0.0) {
      if (log_envelope(kind, base, 0.0, 0.0) < target - 1e-12 * std::max(1.0, std::abs(target)))
        r.holds = false;
      continue;
    }
    const double c = minimal_C(kind, base, s.t, target);
    if (c > r.fitted_C) {
      r.fitted_C = c;
      r.binding_t = s.t;
    }
  }
  return r;
}

}  // namespace vortgrad
