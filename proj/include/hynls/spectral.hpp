#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hynls/field.hpp"

namespace hynls {

// Normalization conventions live here and nowhere else.
//
// Coefficients are unitary: c_m = N^{-1/2} sum_j f_j exp(-i xi_m x_j), with
// xi_m = m / M for the band m = -N/2 .. N/2-1 (Nyquist on the negative side).
// The symmetric continuum transform (2 pi)^{-1/2} \int e^{-i xi x} f dx is
// c_m * dx * sqrt(N / (2 pi)), and every squared continuum norm of the form
// sum_m weight(xi_m) |f^(xi_m)|^2 (d xi) equals dx * sum_m weight(xi_m) |c_m|^2.
double continuum_weight(const Grid& grid);
double continuum_coefficient_scale(const Grid& grid);

// Signed integer mode for storage index i (FFTW order).
inline long long mode_of_index(std::size_t i, std::size_t n) {
  const auto ii = static_cast<long long>(i);
  const auto nn = static_cast<long long>(n);
  return ii < nn / 2 ? ii : ii - nn;
}

class FrequencyField {
 public:
  FrequencyField(const Grid& grid, std::vector<cplx> coefficients);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  // Storage order is FFTW order: m = 0, 1, ..., N/2-1, -N/2, ..., -1.
  std::span<const cplx> coefficients() const { return coeffs_; }
  std::span<cplx> coefficients() { return coeffs_; }

  long long mode(std::size_t i) const { return mode_of_index(i, coeffs_.size()); }
  double wavenumber(std::size_t i) const { return static_cast<double>(mode(i)) * grid_.dk(); }
  // Coefficient of integer mode m in [-N/2, N/2).
  cplx at_mode(long long m) const;

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

FrequencyField forward(const Field& f);
Field inverse(const FrequencyField& F);

// Multiplies mode xi by symbol(xi) and transforms back. Phases relative to
// x cancel for multipliers, so this skips them.
Field apply_multiplier(const Field& f, const std::function<cplx(double)>& symbol);

// exp(i t d_x^2): multiplier exp(-i xi^2 t).
Field free_propagate(const Field& f, double t);

// Convolution with the (periodized) heat kernel: multiplier exp(-eps xi^2).
// Throws std::invalid_argument for eps < 0.
Field heat_smooth(const Field& f, double eps);

// J^s: multiplier <xi>^s = (1 + xi^2)^{s/2}.
Field sobolev_apply(const Field& f, double s);

// Spectral derivative d/dx.
Field derivative(const Field& f);

// In-place unitary transforms on raw storage (FFTW order). Plans are cached
// per size and shared across threads.
void fft_forward_inplace(std::span<cplx> data);
void fft_inverse_inplace(std::span<cplx> data);

}  // namespace hynls
