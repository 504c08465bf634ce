#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vortgrad/field.hpp"
#include "vortgrad/series.hpp"

namespace vortgrad {

struct SimState {
  ScalarField theta;
  double time = 0.0;
  /// Exponent of the Biot-Savart inversion; 1 is Euler.
  double alpha_exponent = 1.0;
};

/// Largest dt step_rk4 accepts is kMaxCfl * spacing / max speed.
inline constexpr double kMaxCfl = 0.5;

/// Admissible step for the given state under kMaxCfl; infinity for a fluid at rest.
double cfl_limit(const SimState& state);

/// One classical RK4 step of theta_t + u . grad theta = 0 with the nonlinear
/// product truncated by the 2/3 rule. The spectral zero mode is not touched.
SimState step_rk4(const SimState& state, double dt);

struct Invariants {
  double energy = 0.0;     ///< 1/2 int |u|^2
  double enstrophy = 0.0;  ///< int theta^2
  double l1 = 0.0;
  double l2 = 0.0;
  double l4 = 0.0;
  double linf = 0.0;
  double mean = 0.0;
};

Invariants conserved_quantities(const SimState& state);

/// A per-sample scalar diagnostic evaluated on the current state.
struct NamedDiagnostic {
  std::string name;
  std::function<double(const SimState&)> evaluate;
};

/// grad_sup, h2, energy, enstrophy, linf, mean.
std::vector<NamedDiagnostic> standard_diagnostics();

struct RunOptions {
  double t_end = 0.0;
  double cfl = 0.4;
  double sample_every = 0.1;
  std::vector<NamedDiagnostic> diagnostics = standard_diagnostics();
  /// Called at every sample with the state and its velocity.
  std::function<void(const SimState&, const VelocityField&)> on_sample;
};

/// Advances `state` to opts.t_end with dt = cfl * spacing / max speed, clipped
/// to land exactly on sample times t0 + k * sample_every and on t_end.
/// Returns one row per sample including t0; empty if t_end == state.time.
DiagnosticTable run(SimState& state, const RunOptions& opts);

}  // namespace vortgrad
