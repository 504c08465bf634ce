#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "vortgrad/error.hpp"
#include "vortgrad/euler.hpp"
#include "vortgrad/fits.hpp"
#include "vortgrad/initial_data.hpp"
#include "vortgrad/ladder.hpp"
#include "vortgrad/manifest.hpp"
#include "vortgrad/model_ode.hpp"
#include "vortgrad/polyline.hpp"
#include "vortgrad/probes.hpp"
#include "vortgrad/series.hpp"
#include "vortgrad/snapshot.hpp"
#include "vortgrad/spectral.hpp"

namespace vortgrad::cli {

namespace fs = std::filesystem;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.n",
      "time.t_end", "time.cfl", "time.sample_every",
      "solver.alpha",
      "init.kind", "init.sigma", "init.bump_x", "init.bump_y", "init.h1", "init.h2",
      "init.min_cells", "init.amplitude", "init.path", "init.dealias",
      "ladder.T", "ladder.lambda", "ladder.mode", "ladder.eps2", "ladder.eps1",
      "ladder.upsilon", "ladder.tau", "ladder.sigma",
      "model.variant", "model.c1", "model.c2", "model.T", "model.dt", "model.record_every",
      "model.alpha", "model.beta", "model.points", "model.nu", "model.nu_amplitude",
      "model.admissibility_samples",
      "advect.enabled", "advect.center_x", "advect.center_y", "advect.gamma",
      "advect.vertices", "advect.dt", "advect.chord_offset", "advect.refine",
      "sweep.axis", "sweep.values", "sweep.halvings",
      "probe.radii", "probe.eps1", "probe.angles",
      "checks.divergence_tol", "checks.lipschitz_C_max", "checks.h2_C_max",
      "checks.exponential_C_max", "checks.min_growth_ratio", "checks.growth_window",
      "checks.refinement_tol", "checks.area_tol", "checks.scaling_factor",
      "checks.variational_tol",
      "output.dir", "output.snapshot_stride",
  };
  return keys;
}

fs::path resolve_out_dir(const Options& opts, const Config& cfg) {
  if (!opts.out.empty()) return opts.out;
  if (auto d = cfg.find_string("output.dir")) return *d;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "vortgrad-out";
}

namespace {

Config load_config(const Options& opts) {
  if (opts.config.empty()) throw ConfigError("--config PATH is required");
  Config cfg = Config::load(opts.config);
  cfg.reject_unknown(known_keys());
  return cfg;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

std::string seconds_since(std::chrono::steady_clock::time_point t0) {
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::string tol(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

CheckRow upper_check(std::string name, std::string tag, double measured, double limit) {
  return {std::move(name), std::move(tag), measured, "<=", tol(limit), measured <= limit};
}

CheckRow lower_check(std::string name, std::string tag, double measured, double limit) {
  return {std::move(name), std::move(tag), measured, ">=", tol(limit), measured >= limit};
}

// Wrap library input errors so the message points at the config line.
template <class F>
auto with_key(const Config& cfg, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    cfg.reject_value(key, e.what());
  }
}

std::optional<ParameterLadder> ladder_from(const Config& cfg, double default_T, bool required) {
  if (!required && !cfg.has_section("ladder")) return std::nullopt;
  LadderOverrides ov;
  ov.eps2 = cfg.find_double("ladder.eps2");
  ov.eps1 = cfg.find_double("ladder.eps1");
  ov.upsilon = cfg.find_double("ladder.upsilon");
  ov.tau = cfg.find_double("ladder.tau");
  ov.sigma = cfg.find_double("ladder.sigma");
  const auto mode = with_key(cfg, "ladder.mode", [&] {
    return parse_ladder_mode(cfg.get_string("ladder.mode", "relaxed"));
  });
  return with_key(cfg, "ladder.T", [&] {
    return resolve_ladder(cfg.get_double("ladder.T", default_T),
                          cfg.get_double("ladder.lambda", 2.0), mode, ov);
  });
}

Grid grid_from(const Config& cfg) {
  return with_key(cfg, "grid.n", [&] { return Grid(cfg.get_size("grid.n", 256)); });
}

BumpSpec bump_from(const Config& cfg) {
  return {cfg.get_double("init.bump_x", 0.9), cfg.get_double("init.bump_y", 1.05),
          cfg.get_double("init.h1", 0.8), cfg.get_double("init.h2", 0.8)};
}

double sigma_from(const Config& cfg) { return cfg.get_double("init.sigma", 0.45); }

ScalarField initial_field(const Config& cfg, const std::string& kind) {
  const Grid g = grid_from(cfg);
  const MollifyOptions mo{cfg.get_double("init.min_cells", 8.0)};
  if (kind == "shear") return ScalarField::sample(g, [](double x, double) { return std::cos(x); });
  if (kind == "smooth")
    return ScalarField::sample(g, [](double x, double y) {
      return std::cos(x) * std::cos(y) + 0.5 * std::cos(2 * x) + 0.3 * std::cos(x + 2 * y);
    });
  if (kind == "cross")
    return with_key(cfg, "init.sigma", [&] { return mollified_cross(g, sigma_from(cfg), mo); });
  if (kind == "cross+bump") {
    const BumpSpec b = bump_from(cfg);
    require_desk_placement(b, sigma_from(cfg));
    return with_key(cfg, "init.h1", [&] { return compose_initial_data(g, sigma_from(cfg), b, mo); });
  }
  cfg.reject_value("init.kind",
                   "expected shear, smooth, cross, cross+bump or snapshot, got '" + kind + "'");
}

SimState initial_state(const Config& cfg) {
  const std::string kind = cfg.get_string("init.kind", "cross+bump");
  const double alpha = cfg.get_double("solver.alpha", 1.0);
  auto make = [&]() -> SimState {
    if (kind == "snapshot") {
      std::filesystem::path p = cfg.require_string("init.path");
      if (p.is_relative()) p = cfg.base_dir() / p;
      SimState s = read_snapshot(p);
      if (cfg.has("solver.alpha")) s.alpha_exponent = alpha;
      return s;
    }
    ScalarField f = initial_field(cfg, kind);
    if (cfg.get_bool("init.dealias", true)) f = dealiased(f);
    return {std::move(f), 0.0, alpha};
  };
  SimState s = make();
  if (const double mu = cfg.get_double("init.amplitude", 1.0); mu != 1.0) s.theta *= mu;
  return s;
}

std::vector<NamedDiagnostic> simulate_diagnostics() {
  auto d = standard_diagnostics();
  d.push_back({"divergence", [](const SimState& s) {
                 return relative_divergence(velocity_from_vorticity(s.theta, s.alpha_exponent));
               }});
  return d;
}

std::string snapshot_name(std::size_t k) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshots/snap_%04zu.bin", k);
  return buf;
}

struct SimOutcome {
  RunManifest manifest;
  DiagnosticTable table;
  double grad0 = 0.0;
  double grad_max = 0.0;
  double lipschitz_C = 0.0;
  double h2_C = 0.0;
  double exponential_C = 0.0;
  double alpha_exponent = 1.0;
  std::optional<GrowthRow> growth;
};

// Builds the initial data, runs the solver and writes every artifact into dir.
SimOutcome simulate_into(const Config& cfg, const fs::path& dir) {
  const auto wall0 = std::chrono::steady_clock::now();
  ensure_dir(dir / "snapshots");
  SimOutcome out;
  RunManifest& m = out.manifest;
  m.command = "simulate";
  m.set("version", version());
  m.absorb("config", cfg.to_text());

  const double t_end = cfg.get_double("time.t_end", 0.0);
  if (auto L = ladder_from(cfg, t_end > 0.0 ? t_end : 1.0, false)) {
    write_text_file(dir / "ladder.txt", L->to_text());
    m.add_output("ladder.txt");
    m.absorb("ladder", L->to_text());
  }

  SimState state = initial_state(cfg);
  const ScalarField theta0 = state.theta;
  out.alpha_exponent = state.alpha_exponent;
  m.set("grid.n", std::to_string(state.theta.grid().n()));
  m.set("grid.spacing", state.theta.grid().spacing());
  m.set("solver.alpha_exponent", state.alpha_exponent);
  write_snapshot(dir / snapshot_name(0), state);
  m.add_output(snapshot_name(0));

  if (t_end == state.time) {
    m.set("timing.wall_seconds", seconds_since(wall0));
    m.write(dir);
    return out;
  }

  RunOptions ro;
  ro.t_end = t_end;
  ro.cfl = cfg.get_double("time.cfl", 0.4);
  ro.sample_every = cfg.get_double("time.sample_every", 0.05);
  ro.diagnostics = simulate_diagnostics();
  const std::size_t stride = cfg.get_size("output.snapshot_stride", 0);
  const bool advect = cfg.get_bool("advect.enabled", false);
  if (advect && state.time != 0.0) cfg.reject_value("advect.enabled", "advection needs data starting at t = 0");
  SnapshotSequence seq;
  std::size_t k = 0;
  ro.on_sample = [&](const SimState& s, const VelocityField& v) {
    if (k > 0 && ((stride > 0 && k % stride == 0) || s.time == t_end)) {
      write_snapshot(dir / snapshot_name(k), s);
      m.add_output(snapshot_name(k));
    }
    if (advect) seq.push(s.time, v);
    ++k;
  };
  out.table = with_key(cfg, "time.t_end", [&] { return run(state, ro); });
  out.table.write_csv(dir / "diagnostics.csv");
  m.add_output("diagnostics.csv");

  const auto grad = out.table.series("grad_sup");
  const auto h2 = out.table.series("h2");
  out.grad0 = grad.front().value;
  out.grad_max = grad.max_value();
  const double sup0 = out.table.value(0, 4);
  const auto lip = envelope_check(grad, EnvelopeKind::Lipschitz, {out.grad0, sup0});
  const auto h2e = envelope_check(h2, EnvelopeKind::H2, {h2.front().value, sup0});
  const auto expo = envelope_check(grad, EnvelopeKind::Exponential, {out.grad0, sup0});
  out.lipschitz_C = lip.fitted_C;
  out.h2_C = h2e.fitted_C;
  out.exponential_C = expo.fitted_C;
  {
    std::ostringstream os;
    os << "kind,fitted_C,binding_t\n";
    os << "lipschitz," << format_g17(lip.fitted_C) << "," << format_g17(lip.binding_t) << "\n";
    os << "h2," << format_g17(h2e.fitted_C) << "," << format_g17(h2e.binding_t) << "\n";
    os << "exponential," << format_g17(expo.fitted_C) << "," << format_g17(expo.binding_t) << "\n";
    write_text_file(dir / "envelopes.csv", os.str());
    m.add_output("envelopes.csv");
  }

  double control = 0.0;
  if (cfg.get_string("init.kind", "cross+bump") == "cross+bump") {
    const auto b = bump_from(cfg);
    control = b.height / b.support_diameter;
  }
  const double window = cfg.get_double("checks.growth_window", 0.1);
  const auto probe = growth_ratio_probe({{"run", control, grad}}, window);
  out.growth = probe.rows.front();
  write_text_file(dir / "growth.csv", probe.to_csv());
  m.add_output("growth.csv");

  double div_max = 0.0;
  for (std::size_t r = 0; r < out.table.rows(); ++r) div_max = std::max(div_max, out.table.value(r, 6));
  m.add_check(upper_check("max relative divergence", "divergence-free", div_max,
                          cfg.get_double("checks.divergence_tol", 1e-12)));
  auto envelope_row = [&](const char* name, const char* tag, double C, const char* key) {
    const auto limit = cfg.find_double(key);
    m.add_check(limit ? upper_check(name, tag, C, *limit)
                      : CheckRow{name, tag, C, "<=", "inf", true});
  };
  envelope_row("fitted C", "lipschitz-envelope", lip.fitted_C, "checks.lipschitz_C_max");
  envelope_row("fitted C", "h2-envelope", h2e.fitted_C, "checks.h2_C_max");
  if (state.alpha_exponent != 1.0)
    envelope_row("fitted C", "exponential-envelope", expo.fitted_C, "checks.exponential_C_max");
  if (auto g = cfg.find_double("checks.min_growth_ratio"))
    m.add_check(lower_check("max gradient ratio", "growth-ratio", out.growth->max_ratio, *g));
  if (cfg.get_string("init.kind", "") == "shear")
    m.add_check(upper_check("sup change of steady shear", "steady-state",
                            sup_distance(state.theta, theta0), 1e-10));

  if (advect) {
    const Vec2 c{cfg.get_double("advect.center_x", 1.0), cfg.get_double("advect.center_y", 1.2)};
    const double gamma = cfg.get_double("advect.gamma", 0.05);
    const std::size_t nv = cfg.get_size("advect.vertices", 64);
    AdvectOptions ao{cfg.get_double("advect.dt", 1e-3), cfg.get_double("advect.refine", 0.0),
                     1 << 16, true};
    const auto src = VelocitySource::snapshots(std::move(seq));
    const auto circ = advect_polyline(src, circle_polyline(c, gamma, nv), t_end, ao);
    ao.closed = false;
    const auto seg = advect_polyline(
        src, chord_polyline(c, gamma, nv / 2 + 1, cfg.get_double("advect.chord_offset", 0.0)),
        t_end, ao);
    const auto st = stretch_and_thickness(seg.image, circ.image);
    const double a0 = polygon_area(circ.initial);
    const double a1 = polygon_area(circ.image);
    std::ostringstream os;
    os << "t,L,d,area_product,area0,area,vertices\n"
       << format_g17(t_end) << "," << format_g17(st.L) << "," << format_g17(st.d) << ","
       << format_g17(st.area_product) << "," << format_g17(a0) << "," << format_g17(a1) << ","
       << circ.image.size() << "\n";
    write_text_file(dir / "stretch.csv", os.str());
    m.add_output("stretch.csv");
    m.add_check(upper_check("relative area drift", "area-preservation", std::abs(a1 - a0) / a0,
                            cfg.get_double("checks.area_tol", 1e-4)));
    const double pig2 = std::numbers::pi * gamma * gamma;
    m.add_check(upper_check("L d / (pi gamma^2)", "area-argument", st.area_product / pig2, 1.1));
  }

  m.set("timing.wall_seconds", seconds_since(wall0));
  m.write(dir);
  return out;
}

bool all_pass(const RunManifest& m) {
  if (m.checks.empty()) return false;
  for (const auto& c : m.checks)
    if (!c.pass) return false;
  return true;
}

void print_checks(const RunManifest& m, const fs::path& where) {
  for (const auto& c : m.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.tag << ": " << c.name << " = "
              << format_g17(c.measured) << " " << c.relation << " " << c.tolerance << "\n";
  std::cout << "manifest: " << (where / "manifest.txt").string() << "\n";
}

// ---- model ----

Perturbation synthetic_nu(double upsilon, double amplitude) {
  const double a = amplitude * 1e-4 * upsilon;
  Perturbation p;
  p.upsilon = upsilon;
  p.nu = [a](double x, double y, double t) {
    const double s = std::sin(t + 1.0), c = std::cos(3.0 * t);
    return Vec2{a * (x * s - y * c), a * (-y * s + x * c)};
  };
  return p;
}

struct ModelPoint {
  double alpha = 0.0, beta = 0.0;
};

std::vector<ModelPoint> model_points(const Config& cfg, const ParameterLadder& L,
                                     std::uint64_t seed) {
  if (cfg.has("model.alpha") || cfg.has("model.beta")) {
    const ModelPoint p{cfg.get_double("model.alpha", 0.0), cfg.get_double("model.beta", 0.0)};
    if (auto v = omega0_violation(p.alpha, p.beta, L))
      throw ConstraintViolation(*v, "initial point (alpha, beta) = (" + format_g17(p.alpha) +
                                        ", " + format_g17(p.beta) + ") is outside Omega_0");
    return {p};
  }
  const std::size_t count = cfg.get_size("model.points", 20);
  if (count == 0) cfg.reject_value("model.points", "must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double p = L.omega_exponent;
  const double b_lo = L.log10_eps1 / p, b_hi = L.log10_eps2;
  std::vector<ModelPoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double b10 = b_lo + (b_hi - b_lo) * u(rng);
    const double a10 = L.log10_eps1 + (p * b10 - L.log10_eps1) * u(rng);
    out.push_back({std::pow(10.0, a10), std::pow(10.0, b10)});
  }
  return out;
}

std::string point_path_name(std::size_t i) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "paths/path_%03zu.csv", i);
  return buf;
}

}  // namespace

int cmd_simulate(const Options& opts) {
  const Config cfg = load_config(opts);
  const fs::path dir = resolve_out_dir(opts, cfg);
  const auto out = simulate_into(cfg, dir);
  print_checks(out.manifest, dir);
  return all_pass(out.manifest) ? kPass : kCheckFailed;
}

int cmd_model(const Options& opts) {
  const auto wall0 = std::chrono::steady_clock::now();
  const Config cfg = load_config(opts);
  const fs::path dir = resolve_out_dir(opts, cfg);
  ensure_dir(dir / "paths");

  const double T = cfg.get_double("model.T", 1.0);
  const ParameterLadder L = *ladder_from(cfg, T, true);
  if (L.is_faithful())
    cfg.reject_value("ladder.mode", "faithful constants underflow; trajectories need mode = relaxed");
  const CrossFieldVariant variant{
      with_key(cfg, "model.variant", [&] { return parse_variant(cfg.get_string("model.variant", "exact")); }),
      cfg.get_double("model.c1", 0.5), cfg.get_double("model.c2", 1.0)};
  const AlephRegion region = AlephRegion::from_ladder(L);

  RunManifest m;
  m.command = "model";
  m.set("version", version());
  m.set("seed", std::to_string(opts.seed));
  m.absorb("config", cfg.to_text());
  m.absorb("ladder", L.to_text());
  write_text_file(dir / "ladder.txt", L.to_text());
  m.add_output("ladder.txt");

  Perturbation nu;
  const std::string nu_kind = cfg.get_string("model.nu", "none");
  if (nu_kind == "synthetic") {
    nu = synthetic_nu(L.upsilon(), cfg.get_double("model.nu_amplitude", 0.4));
    const auto adm = admissible_perturbation_check(
        nu, region, cfg.get_size("model.admissibility_samples", 2000), T, opts.seed);
    if (!adm.pass)
      throw ConstraintViolation(adm.violated, "synthetic perturbation is not admissible (margin " +
                                                  format_g17(std::min(adm.value_margin, adm.gradient_margin)) + ")");
    m.add_check(lower_check("min admissibility margin over samples", "admissible-perturbation",
                            std::min(adm.value_margin, adm.gradient_margin), 1.0));
  } else if (nu_kind != "none") {
    cfg.reject_value("model.nu", "expected none or synthetic, got '" + nu_kind + "'");
  }

  const auto points = model_points(cfg, L, opts.seed);
  TrajectoryOptions to;
  to.dt = cfg.get_double("model.dt", 1e-4);
  to.record_every = cfg.get_size("model.record_every", 100);
  if (to.record_every == 0) cfg.reject_value("model.record_every", "must be positive");

  std::ostringstream table;
  table << "index,alpha,beta,x_T,y_T,x_alpha,x_alpha_fd,bound,log_margin,exit_time,det_J,"
           "fitted_C,log_kappa\n";
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_fd = 0.0;
  std::size_t exits = 0;
  const double expo = 0.5 * (std::exp(T) - 1.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [a, b] = points[i];
    const auto tr = integrate_variational({a, b}, T, nu, variant, region, to);
    write_text_file(dir / point_path_name(i), tr.to_csv());
    m.add_output(point_path_name(i));
    const auto& fin = tr.final_state();
    const double xa = fin.jac->a11;
    // centred difference in alpha with the same step sequence
    const double h = 1e-3 * a;
    TrajectoryOptions plain = to;
    plain.record_every = std::numeric_limits<std::size_t>::max();
    const double xp = integrate_trajectory({a + h, b}, T, nu, variant, region, plain).final_state().x;
    const double xm = integrate_trajectory({a - h, b}, T, nu, variant, region, plain).final_state().x;
    const double fd = (xp - xm) / (2 * h);
    const double log_bound = -expo * std::log(b);
    const double margin = std::log(xa) - log_bound;
    const auto fit = leading_error_bound(tr, variant, region, nu);
    worst_margin = std::min(worst_margin, margin);
    worst_fd = std::max(worst_fd, std::abs(fd - xa) / std::abs(xa));
    if (tr.exit_time) ++exits;
    table << i << "," << format_g17(a) << "," << format_g17(b) << "," << format_g17(fin.x) << ","
          << format_g17(fin.y) << "," << format_g17(xa) << "," << format_g17(fd) << ","
          << format_g17(std::exp(log_bound)) << "," << format_g17(margin) << ","
          << (tr.exit_time ? format_g17(*tr.exit_time) : std::string()) << ","
          << format_g17(fin.jac->det()) << "," << format_g17(fit.fitted_C) << ","
          << format_g17(log_kappa(T, b, fit.fitted_C)) << "\n";
  }
  write_text_file(dir / "points.csv", table.str());
  m.add_output("points.csv");
  m.add_check(upper_check("trajectories leaving the region", "confinement",
                          static_cast<double>(exits), 0.0));
  m.add_check(lower_check("min ln x_alpha(T) - ln bound", "key-estimate", worst_margin, 0.0));
  m.add_check(upper_check("max relative x_alpha error vs centred difference", "variational-consistency",
                          worst_fd, cfg.get_double("checks.variational_tol", 1e-4)));
  m.set("timing.wall_seconds", seconds_since(wall0));
  m.write(dir);
  print_checks(m, dir);
  return all_pass(m) ? kPass : kCheckFailed;
}

// ---- sweep ----

namespace {

// Runs f(0..count-1) on up to `threads` workers; f must not throw.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) f(i);
  };
  std::vector<std::thread> pool;
  const std::size_t extra = std::min<std::size_t>(std::max(1u, threads), count) - (count ? 1 : 0);
  for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

std::string member_dir(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "member_%03zu", i);
  return buf;
}

std::string describe_error(const std::exception& e) {
  std::string s = e.what();
  for (auto& ch : s)
    if (ch == ',' || ch == '\n' || ch == '|') ch = ';';
  return "error: " + s;
}

struct MemberStatus {
  bool ok = false;
  std::string status = "not run";
};

void record_member_status(RunManifest& m, const std::vector<MemberStatus>& st) {
  for (std::size_t i = 0; i < st.size(); ++i)
    if (!st[i].ok) m.add_check({member_dir(i) + " " + st[i].status, "member-status", 0.0, "==", "ok", false});
}

void sweep_simulations(const Config& cfg, const std::string& axis, const std::vector<double>& values,
                       unsigned threads, const fs::path& dir, RunManifest& m) {
  std::vector<Config> members;
  for (double v : values) {
    Config c = cfg;
    if (axis == "h2/h1") {
      c.set("init.h2", format_g17(v * cfg.get_double("init.h1", 0.8)));
    } else if (axis == "n") {
      if (v < 16 || v != std::floor(v)) cfg.reject_value("sweep.values", "grid sizes must be integers");
      c.set("grid.n", std::to_string(static_cast<std::size_t>(v)));
    } else {
      c.set("solver.alpha", format_g17(v));
    }
    members.push_back(std::move(c));
  }
  std::vector<std::optional<SimOutcome>> results(members.size());
  std::vector<MemberStatus> status(members.size());
  parallel_for(members.size(), threads, [&](std::size_t i) {
    try {
      results[i] = simulate_into(members[i], dir / member_dir(i));
      status[i] = {true, "ok"};
    } catch (const std::exception& e) {
      status[i] = {false, describe_error(e)};
    }
  });

  std::ostringstream csv;
  csv << "member,value,status,grad0,grad_max,max_ratio,lipschitz_C,h2_C,exponential_C\n";
  std::vector<GrowthRun> runs;
  for (std::size_t i = 0; i < members.size(); ++i) {
    csv << member_dir(i) << "," << format_g17(values[i]) << "," << status[i].status;
    if (const auto& r = results[i]; r && r->growth) {
      csv << "," << format_g17(r->grad0) << "," << format_g17(r->grad_max) << ","
          << format_g17(r->growth->max_ratio) << "," << format_g17(r->lipschitz_C) << ","
          << format_g17(r->h2_C) << "," << format_g17(r->exponential_C);
      runs.push_back({member_dir(i), values[i], r->table.series("grad_sup")});
    } else {
      csv << ",,,,,,";
    }
    csv << "\n";
    if (results[i]) {
      for (const auto& o : results[i]->manifest.outputs) m.add_output(fs::path(member_dir(i)) / o);
      m.add_output(fs::path(member_dir(i)) / "manifest.txt");
      for (auto c : results[i]->manifest.checks) {
        c.name = member_dir(i) + " " + c.name;
        m.add_check(c);
      }
    }
  }
  write_text_file(dir / "sweep.csv", csv.str());
  m.add_output("sweep.csv");
  record_member_status(m, status);

  if (axis == "h2/h1" && !runs.empty()) {
    const auto probe = growth_ratio_probe(runs, cfg.get_double("checks.growth_window", 0.1));
    write_text_file(dir / "growth.csv", probe.to_csv());
    m.add_output("growth.csv");
    m.add_check({"max ratio nondecreasing in h2/h1", "growth-trend",
                 probe.max_ratio_nondecreasing ? 1.0 : 0.0, "==", "1", probe.max_ratio_nondecreasing});
    for (const auto& row : probe.rows) {
      m.add_check({row.label + " ratio increasing over the initial window", "growth-onset",
                   row.initially_increasing ? 1.0 : 0.0, "==", "1", row.initially_increasing});
      m.add_check({row.label + " ln ln slope", "double-exponential-rate", row.lnln_slope, ">", "0",
                   row.lnln_slope > 0.0});
    }
  }
  if (axis == "n") {
    const double tol = cfg.get_double("checks.refinement_tol", 0.15);
    auto spread = [&](auto field) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& r : results)
        if (r && r->growth) {
          lo = std::min(lo, (*r).*field);
          hi = std::max(hi, (*r).*field);
        }
      return lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::infinity();
    };
    m.add_check(upper_check("relative spread of fitted C across n", "lipschitz-envelope",
                            spread(&SimOutcome::lipschitz_C), tol));
    if (cfg.get_double("solver.alpha", 1.0) != 1.0)
      m.add_check(upper_check("relative spread of fitted C across n", "exponential-envelope",
                              spread(&SimOutcome::exponential_C), tol));
  }
}

void sweep_tau(const Config& cfg, const std::vector<double>& taus, unsigned threads,
               const fs::path& dir, RunManifest& m) {
  const Grid g = grid_from(cfg);
  const auto radii = cfg.get_list("probe.radii", {0.1, 0.2, 0.4});
  const double eps1 = cfg.get_double("probe.eps1", 0.05);
  const std::size_t angles = cfg.get_size("probe.angles", 1440);
  const MollifyOptions mo{cfg.get_double("init.min_cells", 8.0)};
  std::vector<std::optional<PerturbationBoundsReport>> reps(taus.size());
  std::vector<MemberStatus> status(taus.size());
  parallel_for(taus.size(), threads, [&](std::size_t i) {
    try {
      const ScalarField p = mollified_cross(g, taus[i], mo) - singular_cross(g);
      reps[i] = perturbation_field_bounds(p, eps1, radii, taus[i], 0.0, angles);
      status[i] = {true, "ok"};
    } catch (const std::exception& e) {
      status[i] = {false, describe_error(e)};
    }
  });
  std::ostringstream csv;
  csv << "member,tau,status,tau_log_tau,f1_origin,f1_max,hessian_sup";
  for (double r : radii) csv << ",sup_over_r@" << format_g17(r);
  csv << "\n";
  double origin = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double scale = taus[i] * std::abs(std::log(taus[i]));
    csv << member_dir(i) << "," << format_g17(taus[i]) << "," << status[i].status << ","
        << format_g17(scale);
    if (const auto& r = reps[i]) {
      csv << "," << format_g17(r->f1_origin) << "," << format_g17(r->f1_max) << ","
          << format_g17(r->hessian_sup);
      for (double v : r->sup_over_r) csv << "," << format_g17(v);
      origin = std::max(origin, r->f1_max > 0.0 ? r->f1_origin / r->f1_max : 0.0);
    }
    csv << "\n";
  }
  write_text_file(dir / "sweep.csv", csv.str());
  m.add_output("sweep.csv");
  record_member_status(m, status);
  const double factor = cfg.get_double("checks.scaling_factor", 2.0);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i)
      if (reps[i]) {
        const double q = reps[i]->sup_over_r[k] / (taus[i] * std::abs(std::log(taus[i])));
        lo = std::min(lo, q);
        hi = std::max(hi, q);
      }
    m.add_check(upper_check("r = " + format_g17(radii[k]) + " max/min over tau of sup_over_r / (tau ln(1/tau))",
                            "perturbation-field-scaling", hi / lo, factor));
  }
  m.add_check(upper_check("max over tau of F1(0) / F1 max", "f1-vanishes-at-origin", origin, 1e-6));
}

void sweep_omega(const Config& cfg, unsigned threads, const fs::path& dir, RunManifest& m) {
  const Grid g = grid_from(cfg);
  const auto family = halving_family(bump_from(cfg), cfg.get_size("sweep.halvings", 5));
  const double min_cells = cfg.get_double("init.min_cells", 8.0);
  std::vector<std::optional<BumpScalingMember>> members(family.size());
  std::vector<MemberStatus> status(family.size());
  parallel_for(family.size(), threads, [&](std::size_t i) {
    try {
      members[i] = measure_bump(family[i], g, min_cells);
      status[i] = {true, "ok"};
    } catch (const std::exception& e) {
      status[i] = {false, describe_error(e)};
    }
  });
  std::ostringstream csv;
  csv << "member,h1,h2,status,omega,M,hessian,constant\n";
  std::vector<BumpScalingMember> measured;
  for (std::size_t i = 0; i < family.size(); ++i) {
    csv << member_dir(i) << "," << format_g17(family[i].support_diameter) << ","
        << format_g17(family[i].height) << "," << status[i].status;
    if (const auto& b = members[i]) {
      csv << "," << format_g17(b->omega) << "," << format_g17(b->M) << ","
          << format_g17(b->hessian) << "," << format_g17(b->hessian / std::sqrt(b->M * b->omega));
      measured.push_back(*b);
    }
    csv << "\n";
  }
  record_member_status(m, status);
  if (measured.size() >= 2) {
    const auto res = fit_bump_scaling(std::move(measured));
    csv << "fit,slope," << format_g17(res.fit.slope) << ",intercept," << format_g17(res.fit.intercept)
        << ",r_squared," << format_g17(res.fit.r_squared) << ",\n";
    m.add_check({"slope of ln hessian on ln omega", "hessian-scaling", res.fit.slope, "in",
                 "[0.35, 0.65]", res.fit.slope >= 0.35 && res.fit.slope <= 0.65});
    m.add_check(upper_check("max hessian / sqrt(M omega)", "hessian-constant", res.max_constant, 10.0));
  } else {
    m.add_check({"members available for the fit", "hessian-scaling",
                 static_cast<double>(measured.size()), ">=", "2", false});
  }
  write_text_file(dir / "sweep.csv", csv.str());
  m.add_output("sweep.csv");
}

}  // namespace

int cmd_sweep(const Options& opts) {
  const auto wall0 = std::chrono::steady_clock::now();
  const Config cfg = load_config(opts);
  const fs::path dir = resolve_out_dir(opts, cfg);
  ensure_dir(dir);
  const std::string axis = cfg.require_string("sweep.axis");
  RunManifest m;
  m.command = "sweep";
  m.set("version", version());
  m.set("threads", std::to_string(opts.threads));
  m.absorb("config", cfg.to_text());
  if (axis == "h2/h1" || axis == "n" || axis == "alpha-exponent") {
    sweep_simulations(cfg, axis, cfg.get_list("sweep.values", {}), opts.threads, dir, m);
  } else if (axis == "tau") {
    sweep_tau(cfg, cfg.get_list("sweep.values", {0.04, 0.02, 0.01}), opts.threads, dir, m);
  } else if (axis == "omega") {
    sweep_omega(cfg, opts.threads, dir, m);
  } else {
    cfg.reject_value("sweep.axis", "expected h2/h1, tau, omega, n or alpha-exponent, got '" + axis + "'");
  }
  m.set("timing.wall_seconds", seconds_since(wall0));
  m.write(dir);
  print_checks(m, dir);
  return all_pass(m) ? kPass : kCheckFailed;
}

int cmd_report(const std::vector<fs::path>& manifests, const std::string& out) {
  const Report rep = build_report(manifests);
  std::cout << rep.to_text();
  if (!out.empty()) {
    ensure_dir(out);
    write_text_file(fs::path(out) / "report.txt", rep.to_text());
    write_text_file(fs::path(out) / "report.csv", rep.to_csv());
  }
  for (const auto& p : rep.missing) std::cerr << "missing file: " << p.string() << "\n";
  return rep.exit_status();
}

}  // namespace vortgrad::cli
