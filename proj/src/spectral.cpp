#include "vortgrad/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "vortgrad/error.hpp"

namespace vortgrad {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

struct SpectralOps::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  mutable std::vector<double> real_scratch;
  mutable Spectrum complex_scratch;
};

SpectralOps::SpectralOps(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int n = static_cast<int>(grid_.n());
  plans_->real_scratch.assign(grid_.size(), 0.0);
  plans_->complex_scratch.assign(spectral_size(), Complex{});
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->r2c = fftw_plan_dft_r2c_2d(n, n, plans_->real_scratch.data(),
                                     as_fftw(plans_->complex_scratch.data()), flags);
  plans_->c2r = fftw_plan_dft_c2r_2d(n, n, as_fftw(plans_->complex_scratch.data()),
                                     plans_->real_scratch.data(), flags);
  if (plans_->r2c == nullptr || plans_->c2r == nullptr) throw Error("FFTW planning failed");
}

SpectralOps::~SpectralOps() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
}

int SpectralOps::ky(std::size_t row) const noexcept {
  const auto n = static_cast<int>(grid_.n());
  const auto r = static_cast<int>(row);
  return r <= n / 2 ? r : r - n;
}

int SpectralOps::kx(std::size_t col) const noexcept { return static_cast<int>(col); }

double SpectralOps::kx_deriv(std::size_t col) const noexcept {
  return 2 * col == grid_.n() ? 0.0 : static_cast<double>(col);
}

double SpectralOps::ky_deriv(std::size_t row) const noexcept {
  return 2 * row == grid_.n() ? 0.0 : static_cast<double>(ky(row));
}

bool SpectralOps::retained(std::size_t row, std::size_t col) const noexcept {
  const auto cutoff = static_cast<int>(grid_.n() / 3);
  return std::abs(ky(row)) <= cutoff && kx(col) <= cutoff;
}

Spectrum SpectralOps::forward(const ScalarField& f) const {
  if (!(f.grid() == grid_)) throw InvalidInput("grid mismatch in forward transform");
  if (f.cached_spectrum()) return *f.cached_spectrum();
  Spectrum out(spectral_size());
  // r2c does not modify its input, but the API takes a non-const pointer.
  auto* in = const_cast<double*>(f.values().data());
  fftw_execute_dft_r2c(plans_->r2c, in, as_fftw(out.data()));
  return out;
}

ScalarField SpectralOps::inverse(const Spectrum& s) const {
  if (s.size() != spectral_size()) throw InvalidInput("spectrum size mismatch");
  auto& scratch = plans_->complex_scratch;
  std::copy(s.begin(), s.end(), scratch.begin());
  std::vector<double> values(grid_.size());
  fftw_execute_dft_c2r(plans_->c2r, as_fftw(scratch.data()), values.data());
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (double& v : values) v *= scale;
  ScalarField out(grid_, std::move(values));
  out.attach_spectrum(s);
  return out;
}

Spectrum SpectralOps::inverse_laplacian(const Spectrum& f_hat) const {
  Spectrum out(f_hat.size());
  const std::size_t cols = spectral_columns();
  for (std::size_t r = 0; r < grid_.n(); ++r) {
    const double k2y = static_cast<double>(ky(r)) * ky(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double k2 = k2y + static_cast<double>(kx(c)) * kx(c);
      out[r * cols + c] = k2 == 0.0 ? Complex{} : -f_hat[r * cols + c] / k2;
    }
  }
  return out;
}

VelocityField SpectralOps::velocity(const Spectrum& theta_hat, double alpha_exponent) const {
  const std::size_t cols = spectral_columns();
  Spectrum u_hat(theta_hat.size()), v_hat(theta_hat.size());
  const Complex I{0.0, 1.0};
  for (std::size_t r = 0; r < grid_.n(); ++r) {
    const double kyd = ky_deriv(r);
    const double k2y = static_cast<double>(ky(r)) * ky(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double k2 = k2y + static_cast<double>(kx(c)) * kx(c);
      if (k2 == 0.0) continue;
      const double inv = alpha_exponent == 1.0 ? 1.0 / k2 : std::pow(k2, -alpha_exponent);
      const Complex psi = -theta_hat[r * cols + c] * inv;
      u_hat[r * cols + c] = -I * kyd * psi;
      v_hat[r * cols + c] = I * kx_deriv(c) * psi;
    }
  }
  return {inverse(u_hat), inverse(v_hat)};
}

VelocityField SpectralOps::gradient(const Spectrum& f_hat) const {
  const std::size_t cols = spectral_columns();
  Spectrum gx(f_hat.size()), gy(f_hat.size());
  const Complex I{0.0, 1.0};
  for (std::size_t r = 0; r < grid_.n(); ++r) {
    const double kyd = ky_deriv(r);
    for (std::size_t c = 0; c < cols; ++c) {
      gx[r * cols + c] = I * kx_deriv(c) * f_hat[r * cols + c];
      gy[r * cols + c] = I * kyd * f_hat[r * cols + c];
    }
  }
  return {inverse(gx), inverse(gy)};
}

std::pair<double, double> SpectralOps::divergence_sup(const VelocityField& vel) const {
  const Spectrum u_hat = forward(vel.u);
  const Spectrum v_hat = forward(vel.v);
  const std::size_t cols = spectral_columns();
  double div = 0.0, ref = 0.0;
  for (std::size_t r = 0; r < grid_.n(); ++r) {
    const double kyd = ky_deriv(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double kxd = kx_deriv(c);
      const Complex a = u_hat[r * cols + c], b = v_hat[r * cols + c];
      div = std::max(div, std::abs(kxd * a + kyd * b));
      ref = std::max(ref, std::hypot(kxd, kyd) * std::sqrt(std::norm(a) + std::norm(b)));
    }
  }
  return {div, ref};
}

void SpectralOps::dealias(Spectrum& s) const {
  const std::size_t cols = spectral_columns();
  for (std::size_t r = 0; r < grid_.n(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!retained(r, c)) s[r * cols + c] = Complex{};
}

const SpectralOps& spectral_ops(const Grid& grid) {
  thread_local std::map<std::size_t, std::unique_ptr<SpectralOps>> cache;
  auto& slot = cache[grid.n()];
  if (!slot) slot = std::make_unique<SpectralOps>(grid);
  return *slot;
}

bool has_zero_mean(const ScalarField& f) {
  return std::abs(f.mean()) <= 1e-12 * std::max(1.0, f.sup_abs());
}

namespace {
void require_mean_free(const ScalarField& f, const char* what) {
  if (!f.all_finite()) throw InvalidInput(std::string(what) + ": field has non-finite values");
  if (!has_zero_mean(f))
    throw InvalidInput(std::string(what) + ": field mean " + std::to_string(f.mean()) +
                       " is not zero");
}
}  // namespace

VelocityField velocity_from_vorticity(const ScalarField& theta, double alpha_exponent) {
  require_mean_free(theta, "velocity_from_vorticity");
  if (!(alpha_exponent >= 1.0))
    throw InvalidInput("inversion exponent must be >= 1, got " + std::to_string(alpha_exponent));
  const auto& ops = spectral_ops(theta.grid());
  return ops.velocity(ops.forward(theta), alpha_exponent);
}

ScalarField dealiased(const ScalarField& f) {
  const auto& ops = spectral_ops(f.grid());
  Spectrum s = ops.forward(f);
  ops.dealias(s);
  return ops.inverse(s);
}

double grad_sup_norm(const ScalarField& f) {
  if (!f.all_finite()) throw InvalidInput("grad_sup_norm: field has non-finite values");
  const auto& ops = spectral_ops(f.grid());
  const VelocityField g = ops.gradient(ops.forward(f));
  return g.max_speed();
}

double hessian_sup_of_inverse_laplacian(const ScalarField& f) {
  require_mean_free(f, "hessian_sup_of_inverse_laplacian");
  const auto& ops = spectral_ops(f.grid());
  const Spectrum psi = ops.inverse_laplacian(ops.forward(f));
  const std::size_t cols = ops.spectral_columns();
  const std::size_t n = f.grid().n();
  Spectrum hxx(psi.size()), hyy(psi.size()), hxy(psi.size());
  for (std::size_t r = 0; r < n; ++r) {
    const double kyv = ops.ky(r), kyd = ops.ky_deriv(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double kxv = ops.kx(c), kxd = ops.kx_deriv(c);
      const Complex p = psi[r * cols + c];
      hxx[r * cols + c] = -kxv * kxv * p;
      hyy[r * cols + c] = -kyv * kyv * p;
      hxy[r * cols + c] = -kxd * kyd * p;
    }
  }
  double m = 0.0;
  for (const Spectrum* s : {&hxx, &hyy, &hxy}) m = std::max(m, ops.inverse(*s).sup_abs());
  return m;
}

double h2_norm(const ScalarField& f) {
  require_mean_free(f, "h2_norm");
  const auto& ops = spectral_ops(f.grid());
  Spectrum lap = ops.forward(f);
  const std::size_t cols = ops.spectral_columns();
  for (std::size_t r = 0; r < f.grid().n(); ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double k2 = static_cast<double>(ops.ky(r)) * ops.ky(r) +
                        static_cast<double>(ops.kx(c)) * ops.kx(c);
      lap[r * cols + c] *= -k2;
    }
  const ScalarField l = ops.inverse(lap);
  double sum = 0.0;
  for (double v : l.values()) sum += v * v;
  return std::sqrt(sum * f.grid().cell_area());
}

double relative_divergence(const VelocityField& vel) {
  const auto [div, ref] = spectral_ops(vel.u.grid()).divergence_sup(vel);
  return ref == 0.0 ? 0.0 : div / ref;
}

}  // namespace vortgrad
