#include "hynls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hynls/spectral.hpp"

namespace hynls {

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& z : f.values()) s += std::norm(z);
    return std::sqrt(s * f.grid().dx());
  }
  for (const auto& z : f.values()) s += std::pow(std::abs(z), p);
  return std::pow(s * f.grid().dx(), 1.0 / p);
}

namespace {

double weighted_spectral_norm(const Field& f, double s, bool homogeneous) {
  std::vector<cplx> c(f.values().begin(), f.values().end());
  fft_forward_inplace(c);
  const double dk = f.grid().dk();
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double xi = static_cast<double>(mode_of_index(i, c.size())) * dk;
    double weight = 1.0;
    if (homogeneous) {
      if (s != 0.0) weight = (xi == 0.0) ? 0.0 : std::pow(xi * xi, s);
    } else if (s != 0.0) {
      weight = std::pow(1.0 + xi * xi, s);
    }
    acc += weight * std::norm(c[i]);
  }
  return std::sqrt(acc * continuum_weight(f.grid()));
}

}  // namespace

double sobolev_norm(const Field& f, double s) { return weighted_spectral_norm(f, s, false); }

double homogeneous_sobolev_norm(const Field& f, double s) { return weighted_spectral_norm(f, s, true); }

double spacetime_norm(std::span<const Field> snapshots, double dt, double q, double r) {
  if (snapshots.empty()) throw std::invalid_argument("spacetime norm of an empty trajectory");
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& f : snapshots) m = std::max(m, lp_norm(f, r));
    return m;
  }
  if (snapshots.size() == 1) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const double w = (k == 0 || k + 1 == snapshots.size()) ? 0.5 : 1.0;
    acc += w * std::pow(lp_norm(snapshots[k], r), q);
  }
  return std::pow(acc * dt, 1.0 / q);
}

double admissible_q(double r) {
  if (!(r >= 2.0)) throw std::invalid_argument("admissible exponent needs r in [2, inf]");
  if (r == 2.0) return kInf;
  if (std::isinf(r)) return 4.0;
  return 4.0 * r / (r - 2.0);
}

double dual_gamma(double rho) {
  if (!(rho >= 1.0 && rho <= 2.0)) {
    throw std::invalid_argument("dually admissible exponent needs rho in [1, 2]");
  }
  return 4.0 * rho / (5.0 * rho - 2.0);
}

EnergyValue energy(const Field& w, const NonlinearityParams& params) {
  EnergyValue e;
  e.sign = params.sign;
  const double grad = homogeneous_sobolev_norm(w, 1.0);
  e.kinetic = 0.5 * grad * grad;
  const Field ws = heat_smooth(w, params.eps);
  const double p = params.alpha + 1.0;
  e.potential = std::pow(lp_norm(ws, p), p) / p;
  e.total = e.kinetic - sign_value(params.sign) * e.potential;
  return e;
}

double strichartz_ratio(const Field& v0, double r, double T, int n_t) {
  const double mass = lp_norm(v0, 2.0);
  if (mass == 0.0) throw std::invalid_argument("Strichartz ratio of zero data");
  if (n_t < 1 || !(T > 0.0)) throw std::invalid_argument("Strichartz ratio needs T > 0, n_t >= 1");
  std::vector<cplx> c(v0.values().begin(), v0.values().end());
  fft_forward_inplace(c);
  const double dt = T / n_t;
  const double dk = v0.grid().dk();
  std::vector<Field> snapshots;
  snapshots.reserve(static_cast<std::size_t>(n_t) + 1);
  for (int k = 0; k <= n_t; ++k) {
    const double t = k * dt;
    std::vector<cplx> ck(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double xi = static_cast<double>(mode_of_index(i, c.size())) * dk;
      ck[i] = c[i] * std::polar(1.0, -xi * xi * t);
    }
    fft_inverse_inplace(ck);
    snapshots.emplace_back(v0.grid(), std::move(ck));
  }
  return spacetime_norm(snapshots, dt, admissible_q(r), r) / mass;
}

std::vector<Field> duhamel_integral(std::span<const Field> forcing, double dt) {
  std::vector<Field> out;
  if (forcing.empty()) return out;
  const Grid& grid = forcing.front().grid();
  const std::size_t n = grid.size();
  const double dk = grid.dk();
  // In Fourier space the integral is e^{-i xi^2 t} int_0^t e^{i xi^2 tau} F^(tau) dtau.
  std::vector<cplx> acc(n, cplx{0.0, 0.0});
  std::vector<cplx> prev(n, cplx{0.0, 0.0});
  out.reserve(forcing.size());
  for (std::size_t k = 0; k < forcing.size(); ++k) {
    const double tau = static_cast<double>(k) * dt;
    std::vector<cplx> c(forcing[k].values().begin(), forcing[k].values().end());
    fft_forward_inplace(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = static_cast<double>(mode_of_index(i, n)) * dk;
      c[i] *= std::polar(1.0, xi * xi * tau);
    }
    if (k > 0) {
      for (std::size_t i = 0; i < n; ++i) acc[i] += 0.5 * dt * (prev[i] + c[i]);
    }
    prev = c;
    std::vector<cplx> value(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = static_cast<double>(mode_of_index(i, n)) * dk;
      value[i] = acc[i] * std::polar(1.0, -xi * xi * tau);
    }
    fft_inverse_inplace(value);
    out.emplace_back(grid, std::move(value), tau);
  }
  return out;
}

double inhomogeneous_strichartz_ratio(std::span<const Field> forcing, double dt, double r,
                                      double rho) {
  const double denom = spacetime_norm(forcing, dt, dual_gamma(rho), rho);
  if (denom == 0.0) throw std::invalid_argument("inhomogeneous Strichartz ratio of zero forcing");
  const auto integral = duhamel_integral(forcing, dt);
  return spacetime_norm(integral, dt, admissible_q(r), r) / denom;
}

Field random_hs_field(const Grid& grid, double s, std::mt19937_64& rng, long long band) {
  const std::size_t n = grid.size();
  if (band < 0) band = static_cast<long long>(n) / 4;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> c(n, cplx{0.0, 0.0});
  const double dk = grid.dk();
  for (std::size_t i = 0; i < n; ++i) {
    const long long m = mode_of_index(i, n);
    const double re = normal(rng);
    const double im = normal(rng);
    if (std::llabs(m) > band) continue;
    const double xi = static_cast<double>(m) * dk;
    c[i] = cplx{re, im} * std::pow(1.0 + xi * xi, -0.5 * (s + 0.6));
  }
  fft_inverse_inplace(c);
  Field f(grid, std::move(c));
  const double norm = lp_norm(f, 2.0);
  if (norm > 0.0) f *= cplx{1.0 / norm, 0.0};
  return f;
}

}  // namespace hynls
