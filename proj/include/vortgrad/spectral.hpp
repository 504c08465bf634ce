#pragma once

#include <memory>

#include "vortgrad/field.hpp"

namespace vortgrad {

/// FFT-backed differential operators on one grid. Plans use FFTW_ESTIMATE so
/// repeated runs are bit-reproducible. Instances are not shared across
/// threads; use spectral_ops() to get the calling thread's instance.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const noexcept { return grid_; }
  std::size_t spectral_columns() const noexcept { return grid_.n() / 2 + 1; }
  std::size_t spectral_size() const noexcept { return grid_.n() * spectral_columns(); }

  /// Signed wavenumber of spectral row / column.
  int ky(std::size_t row) const noexcept;
  int kx(std::size_t col) const noexcept;
  /// Wavenumber used for first derivatives: the Nyquist mode maps to zero.
  double kx_deriv(std::size_t col) const noexcept;
  double ky_deriv(std::size_t row) const noexcept;
  /// True if the mode survives 2/3-rule truncation.
  bool retained(std::size_t row, std::size_t col) const noexcept;

  Spectrum forward(const ScalarField& f) const;
  /// Normalized inverse; the result keeps `s` as its cached spectrum.
  ScalarField inverse(const Spectrum& s) const;

  /// u = grad_perp Delta^{-alpha} theta, i.e. psi_hat = -theta_hat / |k|^{2 alpha},
  /// (u, v) = (-d_y psi, d_x psi). Zero mode dropped.
  VelocityField velocity(const Spectrum& theta_hat, double alpha_exponent) const;
  VelocityField gradient(const Spectrum& f_hat) const;
  /// Spectrum of the inverse Laplacian (zero mode dropped).
  Spectrum inverse_laplacian(const Spectrum& f_hat) const;
  /// Spectral divergence of a velocity field, sup over modes, and the sup
  /// of the modal magnitudes it is measured against.
  std::pair<double, double> divergence_sup(const VelocityField& vel) const;

  /// Zero every mode removed by the 2/3 rule.
  void dealias(Spectrum& s) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

/// Thread-local cached operator set for `grid`.
const SpectralOps& spectral_ops(const Grid& grid);

/// Tolerance used to accept a field as mean-free.
bool has_zero_mean(const ScalarField& f);

/// u = grad_perp Delta^{-alpha} theta. Throws InvalidInput on a nonzero mean,
/// non-finite samples, or alpha_exponent < 1.
VelocityField velocity_from_vorticity(const ScalarField& theta, double alpha_exponent = 1.0);

/// f with every mode the 2/3 rule truncates removed. The solver never
/// moves those modes, so data carrying them keeps a frozen residue.
ScalarField dealiased(const ScalarField& f);

/// Max over grid points of |grad f|, derivatives computed spectrally.
double grad_sup_norm(const ScalarField& f);

/// Max over the grid of the largest absolute Hessian entry of Delta^{-1} f.
double hessian_sup_of_inverse_laplacian(const ScalarField& f);

/// ||Delta f||_2 on the torus.
double h2_norm(const ScalarField& f);

/// Relative spectral divergence: max_k |k.u_hat(k)| / max_k |k||u_hat(k)|.
double relative_divergence(const VelocityField& vel);

}  // namespace vortgrad
