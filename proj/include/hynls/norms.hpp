#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

#include "hynls/field.hpp"
#include "hynls/nonlinearity.hpp"

namespace hynls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Rectangle-rule L^p norm; p = infinity is the max modulus. Throws for p < 1.
double lp_norm(const Field& f, double p);

// (sum <xi>^{2s} |f^(xi)|^2)^{1/2} in continuum normalization.
double sobolev_norm(const Field& f, double s);
// Same with weight |xi|^{2s}.
double homogeneous_sobolev_norm(const Field& f, double s);

// (int_0^T ||f(t)||_r^q dt)^{1/q} with the trapezoid rule over uniformly
// spaced snapshots; q = infinity takes the max. Throws on an empty span.
double spacetime_norm(std::span<const Field> snapshots, double dt, double q, double r);

// Solves 2/q + 1/r = 1/2 for r in [2, inf].
double admissible_q(double r);
// Solves 2/gamma + 1/rho = 5/2 for rho in [1, 2].
double dual_gamma(double rho);

struct EnergyValue {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  Sign sign = Sign::defocusing;
};

// E_eps(w) = int 1/2 |w_x|^2 -/+ 1/(alpha+1) |w * phi_eps|^{alpha+1} dx,
// the upper sign for focusing.
EnergyValue energy(const Field& w, const NonlinearityParams& params);

// ||exp(i t d_x^2) v0||_{L^q([0,T], L^r)} / ||v0||_2 with q = q_a(r), sampled
// at n_t + 1 uniform times. Throws std::invalid_argument for zero v0.
double strichartz_ratio(const Field& v0, double r, double T, int n_t);

// ||int_0^t exp(i(t-tau) d_x^2) F(tau) dtau||_{L^{q_a(r)} L^r} divided by
// ||F||_{L^{gamma_a(rho)} L^rho}; F sampled on a uniform grid of step dt.
double inhomogeneous_strichartz_ratio(std::span<const Field> forcing, double dt, double r,
                                      double rho);

// Duhamel integral int_0^{t_n} exp(i(t_n - tau) d_x^2) F(tau) dtau at every
// sample time, trapezoid rule.
std::vector<Field> duhamel_integral(std::span<const Field> forcing, double dt);

// Random field with independent complex Gaussian coefficients damped by
// <xi>^{-s-0.6}; modes limited to |m| <= band (default N/4) so that products
// of two such fields are resolved. Normalized to unit L^2 norm.
Field random_hs_field(const Grid& grid, double s, std::mt19937_64& rng, long long band = -1);

}  // namespace hynls
