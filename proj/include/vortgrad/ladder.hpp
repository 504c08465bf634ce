#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vortgrad {

enum class LadderMode { Faithful, Relaxed };

/// One inequality of the ladder, evaluated as lhs <= rhs in log10 units.
struct LadderConstraint {
  std::string name;
  std::string statement;
  double lhs_log10 = 0.0;
  double rhs_log10 = 0.0;
  /// Decades of room: rhs - lhs. Positive means satisfied.
  double slack_decades() const { return rhs_log10 - lhs_log10; }
  bool satisfied() const { return slack_decades() > 0.0; }
};

/// Values a caller may pin; each is the actual value, not its log.
struct LadderOverrides {
  std::optional<double> eps2;
  std::optional<double> eps1;
  std::optional<double> upsilon;
  std::optional<double> tau;
  std::optional<double> sigma;
};

/// Constants of the construction, chosen in the order
/// T -> eps2 -> eps1 -> {upsilon, tau, sigma}. Everything but T and lambda is
/// stored as log10 so the faithful regime never underflows.
class ParameterLadder {
 public:
  double T = 0.0;
  double lambda = 0.0;
  LadderMode mode = LadderMode::Faithful;
  double log10_eps2 = 0.0;
  double log10_eps1 = 0.0;
  double log10_upsilon = 0.0;
  double log10_tau = 0.0;
  double log10_sigma = 0.0;
  /// Exponent p in Omega_0 = {eps1 < alpha < beta^p, beta < eps2}.
  /// Faithful: 8 e^{2T}. Relaxed: 3 e^T + 3.
  double omega_exponent = 0.0;
  std::vector<LadderConstraint> constraints;
  std::vector<std::string> notes;

  bool is_faithful() const { return mode == LadderMode::Faithful; }
  bool all_satisfied() const;
  const LadderConstraint& constraint(const std::string& name) const;

  /// Actual values; only meaningful in relaxed mode (faithful ones underflow).
  double eps2() const;
  double eps1() const;
  double upsilon() const;
  double tau() const;
  double sigma() const;

  /// Flat "key = value" text; log10 values carry a log10_ prefix.
  std::string to_text() const;
};

/// Confinement exponent 8 e^{2T} of Omega_0 in the faithful regime.
double faithful_omega_exponent(double T);

/// Throws InvalidInput unless T > 0 and lambda > 1; throws
/// ConstraintViolation naming the first inequality a user override breaks.
ParameterLadder resolve_ladder(double T, double lambda, LadderMode mode,
                               const LadderOverrides& overrides = {});

LadderMode parse_ladder_mode(const std::string& s);
std::string to_string(LadderMode mode);

}  // namespace vortgrad
