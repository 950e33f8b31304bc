#include "hynls/torus_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hynls/errors.hpp"
#include "hynls/spectral.hpp"

namespace hynls {

double spectral_tail_ratio(const Field& f) {
  std::vector<cplx> c(f.values().begin(), f.values().end());
  fft_forward_inplace(c);
  const auto n = static_cast<long long>(c.size());
  const double cutoff = (2.0 / 3.0) * 0.5 * static_cast<double>(n);
  double peak = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    peak = std::max(peak, a);
    if (static_cast<double>(std::llabs(mode_of_index(i, c.size()))) >= cutoff) tail = std::max(tail, a);
  }
  return peak == 0.0 ? 0.0 : tail / peak;
}

void require_resolved(const Field& f, const char* what) {
  const double ratio = spectral_tail_ratio(f);
  if (!(ratio < kResolutionTail)) {
    throw ResolutionError(std::string(what) + " is under-resolved: spectral tail ratio " +
                              std::to_string(ratio) + " at 2/3 Nyquist",
                          ratio);
  }
}

namespace {

Field nonlinear_rhs(const Field& w, const NonlinearityParams& params) {
  // w_t = +/- i N(w)
  Field n = torus_smoothed_nonlinearity(w, params);
  n *= cplx{0.0, sign_value(params.sign)};
  return n;
}

void require_finite(const Field& f, double t) {
  if (!f.all_finite()) throw BlowUpError("non-finite samples", t, std::nan(""));
}

Field raw_field(const Grid& grid, std::vector<cplx> values) {
  // Bypasses the finiteness check so the caller can report blow-up itself.
  Field f(grid);
  std::copy(values.begin(), values.end(), f.values().begin());
  return f;
}

}  // namespace

Field nonlinear_substep(const Field& w, double h, const NonlinearityParams& params) {
  if (params.eps == 0.0) {
    const double s = sign_value(params.sign) * h;
    Field out = w;
    for (auto& z : out.values()) {
      const double r = std::abs(z);
      const double rate = params.alpha == 1.0 ? 1.0 : (params.alpha == 2.0 ? r : std::pow(r, params.alpha - 1.0));
      z *= std::polar(1.0, s * rate);
    }
    return out;
  }
  auto axpy = [](const Field& base, double a, const Field& k) {
    std::vector<cplx> v(base.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = base[j] + a * k[j];
    return raw_field(base.grid(), std::move(v));
  };
  const Field k1 = nonlinear_rhs(w, params);
  const Field k2 = nonlinear_rhs(axpy(w, 0.5 * h, k1), params);
  const Field k3 = nonlinear_rhs(axpy(w, 0.5 * h, k2), params);
  const Field k4 = nonlinear_rhs(axpy(w, h, k3), params);
  std::vector<cplx> out(w.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = w[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return raw_field(w.grid(), std::move(out));
}

Field strang_step(const Field& w, const TimeStepper& stepper) {
  const double h = 0.5 * stepper.dt;
  Field a = nonlinear_substep(w, h, stepper.params);
  require_finite(a, w.time().value_or(0.0));
  Field b = free_propagate(a, stepper.dt);
  Field c = nonlinear_substep(b, h, stepper.params);
  require_finite(c, w.time().value_or(0.0) + stepper.dt);
  c.set_time(w.time() ? std::optional<double>(*w.time() + stepper.dt) : std::nullopt);
  return c;
}

int step_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("horizon and time step must be positive");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("time step does not divide the horizon");
  }
  return static_cast<int>(rounded);
}

TorusDiagnostics torus_diagnostics(const Field& w, const NonlinearityParams& params) {
  TorusDiagnostics d;
  d.mass = squared_l2(w);
  d.h1_norm = sobolev_norm(w, 1.0);
  d.sup_norm = lp_norm(w, kInf);
  d.energy = energy(w, params);
  return d;
}

TorusTrajectory solve_torus(const Field& w0, double T, const TimeStepper& stepper,
                            const SolveOptions& options) {
  stepper.params.validate();
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  const int steps = step_count(T, stepper.dt);
  if (options.check_resolution) require_resolved(w0, "torus initial data");

  TorusTrajectory traj;
  traj.dt = stepper.dt;
  traj.params = stepper.params;
  Field w = heat_smooth(w0, stepper.params.eps);
  w.set_time(0.0);
  const double mass0 = squared_l2(w);

  auto record = [&](const Field& f, double t) {
    traj.times.push_back(t);
    traj.states.push_back(f);
    traj.diagnostics.push_back(torus_diagnostics(f, stepper.params));
  };
  record(w, 0.0);
  for (int n = 1; n <= steps; ++n) {
    w = strang_step(w, stepper);
    const double t = n * stepper.dt;
    w.set_time(t);
    const double mass = squared_l2(w);
    const double drift = mass0 > 0.0 ? std::abs(mass - mass0) / mass0 : mass;
    if (drift > kBlowUpMassDrift) throw BlowUpError("mass drift above limit", t, drift);
    if (n % options.record_every == 0 || n == steps) record(w, t);
  }
  return traj;
}

PicardResult picard_fixed_point(std::vector<Field> base,
                                const std::function<Field(std::size_t, const Field&)>& nonlinearity,
                                Sign sign, double dt, const PicardOptions& options) {
  if (base.empty()) throw std::invalid_argument("Picard iteration needs at least one node");
  PicardResult result;
  result.dt = dt;
  double scale = 0.0;
  for (const auto& f : base) scale = std::max(scale, lp_norm(f, 2.0));
  const double tol = options.abs_tol * (1.0 + scale);
  const cplx factor{0.0, sign_value(sign)};

  std::vector<Field> current = base;
  result.iterates_at_T.push_back(current.back());
  int increases = 0;
  for (int k = 0; k < options.k_max; ++k) {
    std::vector<Field> forcing;
    forcing.reserve(current.size());
    for (std::size_t n = 0; n < current.size(); ++n) forcing.push_back(nonlinearity(n, current[n]));
    const auto integral = duhamel_integral(forcing, dt);
    std::vector<Field> next = base;
    double d = 0.0;
    for (std::size_t n = 0; n < next.size(); ++n) {
      for (std::size_t j = 0; j < next[n].size(); ++j) next[n][j] += factor * integral[n][j];
      if (!next[n].all_finite()) throw DivergenceError("Picard iterate became non-finite");
      d = std::max(d, lp_norm(next[n] - current[n], 2.0));
    }
    if (!result.differences.empty()) {
      const double prev = result.differences.back();
      result.ratios.push_back(prev > 0.0 ? d / prev : 0.0);
      increases = d > prev ? increases + 1 : 0;
      if (increases >= 3) throw DivergenceError("Picard differences increased three times in a row");
    }
    result.differences.push_back(d);
    current = std::move(next);
    result.iterates_at_T.push_back(current.back());
    if (d <= tol) {
      result.converged = true;
      break;
    }
  }
  result.final_iterate = std::move(current);
  return result;
}

PicardResult picard_iterate_torus(const Field& w0, double T, const TimeStepper& stepper,
                                  const PicardOptions& options) {
  stepper.params.validate();
  const int steps = step_count(T, stepper.dt);
  const Field start = heat_smooth(w0, stepper.params.eps);
  std::vector<Field> base;
  base.reserve(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) base.push_back(free_propagate(start, n * stepper.dt));
  const auto params = stepper.params;
  return picard_fixed_point(
      std::move(base), [&params](std::size_t, const Field& w) { return torus_smoothed_nonlinearity(w, params); },
      params.sign, stepper.dt, options);
}

double torus_local_time(const Field& w0, double alpha, double safety_C) {
  const double r = sobolev_norm(w0, 1.0);
  if (r == 0.0 || alpha == 1.0) return safety_C;
  return safety_C * std::pow(r, 1.0 - alpha);
}

namespace {

// Largest X >= 0 with X^2 <= a + b X^p, p < 2.
double largest_root(double a, double b, double p) {
  double x = std::max({1.0, std::sqrt(std::abs(a)), std::pow(std::max(b, 0.0) + 1.0, 1.0 / (2.0 - p))}) * 4.0;
  for (int it = 0; it < 500; ++it) {
    const double rhs = a + b * std::pow(x, p);
    if (rhs <= 0.0) return 0.0;
    const double next = std::sqrt(rhs);
    if (std::abs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  return x;
}

}  // namespace

PropertyReport h1_growth_report(const TorusTrajectory& traj, double identity_tolerance,
                                double gn_constant) {
  PropertyReport r;
  r.name = "h1_growth";
  r.set_param("alpha", traj.params.alpha);
  r.set_param("eps", traj.params.eps);
  r.set_param("sign", traj.params.sign == Sign::focusing ? "focusing" : "defocusing");
  r.set_param("identity_tolerance", identity_tolerance);
  if (traj.states.empty()) {
    r.notes = "empty trajectory";
    r.finalize();
    return r;
  }
  const auto& d0 = traj.diagnostics.front();
  const double alpha = traj.params.alpha;
  const double s = sign_value(traj.params.sign);
  const double a = d0.mass + 2.0 * d0.energy.total;
  double worst = 0.0;
  double h1_bound = 0.0;
  if (traj.params.sign == Sign::defocusing) {
    h1_bound = a;
  } else {
    const double p = 0.5 * (alpha - 1.0);
    const double b = 2.0 * gn_constant / (alpha + 1.0) * std::pow(d0.mass, 0.25 * (alpha + 3.0));
    const double x = largest_root(a, b, p);
    h1_bound = x * x;
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    const double h1sq = d.h1_norm * d.h1_norm;
    const double predicted = a + s * 2.0 * d.energy.potential;
    const double residual = std::abs(h1sq - predicted);
    worst = std::max(worst, residual / std::max(h1sq, 1e-300));
    r.add(residual, identity_tolerance * h1sq);
    r.add(h1sq, h1_bound * (1.0 + identity_tolerance));
  }
  r.notes = "max relative identity residual " + std::to_string(worst) + "; H^1 bound squared " +
            std::to_string(h1_bound);
  r.finalize();
  return r;
}

}  // namespace hynls
