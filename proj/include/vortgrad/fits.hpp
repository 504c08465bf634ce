#pragma once

#include <string>
#include <vector>

#include "vortgrad/series.hpp"

namespace vortgrad {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 distinct x.
RateFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

enum class FitDirection { Auto, Decay, Growth };

/// Regresses ln ln(1/y) (decay, values in (0, 1)) or ln ln(y) (growth,
/// values > 1) against t over [t_min, t_max]. Auto picks decay when the
/// first windowed value is below 1. Throws InvalidInput naming the first
/// inadmissible sample, or if fewer than 5 samples fall in the window.
RateFit fit_double_exponential(const DiagnosticSeries& series, double t_min, double t_max,
                               FitDirection direction = FitDirection::Auto);

enum class EnvelopeKind {
  Lipschitz,    ///< g(t) <= exp(C (1 + log+ g0) e^{C t})
  H2,           ///< j(t) <= exp(((1 + 2 log+ j0) e^{C s t} - 1) / 2)
  Exponential,  ///< g(t) <= g0 exp(C s t)
};

EnvelopeKind parse_envelope_kind(const std::string& s);
std::string to_string(EnvelopeKind kind);

struct EnvelopeBase {
  double norm0 = 1.0;      ///< g0 = ||grad theta_0||_inf, or j0 = ||theta_0||_H2
  double sup_theta0 = 1.0; ///< s = ||theta_0||_inf
};

struct EnvelopeResult {
  double fitted_C = 0.0;
  bool holds = true;
  /// Time of the sample that fixed C.
  double binding_t = 0.0;
};

/// Smallest C >= 0 for which the envelope dominates every sample.
EnvelopeResult envelope_check(const DiagnosticSeries& series, EnvelopeKind kind,
                              const EnvelopeBase& base);
/// As envelope_check, for a series of natural logs of the norm; lets
/// double-exponential data past exp(709) be checked.
EnvelopeResult envelope_check_log(const DiagnosticSeries& log_series, EnvelopeKind kind,
                                  const EnvelopeBase& base);

}  // namespace vortgrad
