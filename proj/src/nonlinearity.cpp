#include "hynls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hynls/spectral.hpp"

namespace hynls {

void NonlinearityParams::validate() const {
  if (!(alpha >= 1.0 && alpha <= 5.0)) {
    throw std::invalid_argument("alpha must lie in [1, 5], got " + std::to_string(alpha));
  }
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("smoothing width must be nonnegative");
  }
}

namespace {

// |z|^{alpha-1} with the convention |z|^0 = 1.
double modulus_power(double r, double alpha) {
  if (alpha == 1.0) return 1.0;
  if (alpha == 2.0) return r;
  if (alpha == 3.0) return r * r;
  return std::pow(r, alpha - 1.0);
}

Field modulus(const Field& f) {
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::abs(f[j]);
  return Field(f.grid(), std::move(out));
}

}  // namespace

cplx power_nonlinearity(cplx z, double alpha) { return modulus_power(std::abs(z), alpha) * z; }

Field g_alpha(const Field& w, const Field& v, double alpha) {
  require_same_grid(w, v);
  std::vector<cplx> out(v.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (v[j] == cplx{0.0, 0.0}) continue;
    out[j] = power_nonlinearity(v[j] + w[j], alpha) - power_nonlinearity(w[j], alpha);
  }
  return Field(v.grid(), std::move(out));
}

Field g_eps(const Field& w, const Field& v, const NonlinearityParams& params) {
  require_same_grid(w, v);
  if (params.alpha != 2.0 && !params.experimental) {
    throw std::invalid_argument("g_eps is defined for the quadratic nonlinearity only");
  }
  if (params.eps == 0.0 && params.alpha == 2.0) return g_alpha(w, v, 2.0);

  Field u = v + w;
  // Experimental extension for alpha != 2: smooth |.|^{alpha-1} instead of |.|.
  auto modulus_weight = [&](const Field& f) {
    if (params.alpha == 2.0) return modulus(f);
    std::vector<cplx> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = modulus_power(std::abs(f[j]), params.alpha);
    return Field(f.grid(), std::move(out));
  };
  const Field mu = heat_smooth(modulus_weight(u), params.eps);
  const Field mw = heat_smooth(modulus_weight(w), params.eps);
  std::vector<cplx> out(v.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = mu[j].real() * u[j] - mw[j].real() * w[j];
  }
  return Field(v.grid(), std::move(out));
}

Field torus_smoothed_nonlinearity(const Field& w, const NonlinearityParams& params) {
  if (params.alpha > 2.0 && !params.experimental) {
    throw std::invalid_argument("the smoothed torus nonlinearity covers alpha in [1, 2]");
  }
  const Field ws = heat_smooth(w, params.eps);
  std::vector<cplx> out(ws.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = power_nonlinearity(ws[j], params.alpha);
  return heat_smooth(Field(w.grid(), std::move(out)), params.eps);
}

SizeEstimate size_estimate_pair(cplx v1, cplx v2, cplx w, double alpha) {
  if (alpha < 1.0) throw std::invalid_argument("size estimate requires alpha >= 1");
  const double lhs = std::abs(power_nonlinearity(v1 + w, alpha) - power_nonlinearity(v2 + w, alpha));
  const double constant = alpha * std::max(1.0, std::pow(2.0, alpha - 1.0));
  const double weights = modulus_power(std::abs(v1), alpha) + modulus_power(std::abs(v2), alpha) +
                         modulus_power(std::abs(w), alpha);
  return {lhs, constant * weights * std::abs(v1 - v2)};
}

}  // namespace hynls
