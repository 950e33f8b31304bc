#include "hynls/hybrid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hynls/errors.hpp"
#include "hynls/nonlinearity.hpp"
#include "hynls/norms.hpp"
#include "hynls/spectral.hpp"

namespace hynls {

double local_time(double v0_l2, double w_sup, double safety_C) {
  const double a = v0_l2 > 0.0 ? std::pow(v0_l2, -4.0 / 3.0) : kInf;
  const double b = w_sup > 0.0 ? 1.0 / w_sup : kInf;
  return safety_C * std::min(a, b);
}

double local_time(const Field& v0, const TorusTrajectory& w_traj, double safety_C) {
  double sup = 0.0;
  for (const auto& d : w_traj.diagnostics) sup = std::max(sup, d.sup_norm);
  return local_time(lp_norm(v0, 2.0), sup, safety_C);
}

namespace {

double modulus_power(double r, double alpha) {
  if (alpha == 1.0) return 1.0;
  if (alpha == 2.0) return r;
  if (alpha == 3.0) return r * r;
  return std::pow(r, alpha - 1.0);
}

cplx power(cplx z, double alpha) { return modulus_power(std::abs(z), alpha) * z; }

NonlinearityParams unsmoothed(NonlinearityParams p) {
  p.eps = 0.0;
  return p;
}

// Exact nonlinear flow of w: w exp(+/- i tau |w|^{alpha-1}).
Field rotate(const Field& w, double tau, const NonlinearityParams& p) {
  const double s = sign_value(p.sign) * tau;
  Field out = w;
  for (auto& z : out.values()) z *= std::polar(1.0, s * modulus_power(std::abs(z), p.alpha));
  return out;
}

// Advances v over duration h on v_t = +/- i G(w(tau), v).
Field v_nonlinear_half(const Field& v, const Field& w_start, double h, const NonlinearityParams& p) {
  const cplx is{0.0, sign_value(p.sign)};
  if (p.eps == 0.0) {
    Field out = v;
    const double s = sign_value(p.sign);
    for (std::size_t j = 0; j < v.size(); ++j) {
      const cplx vj = v[j];
      if (vj == cplx{0.0, 0.0}) continue;
      const cplx w0 = w_start[j];
      const double rate = s * modulus_power(std::abs(w0), p.alpha);
      const cplx pw0 = power(w0, p.alpha);
      // |w(tau)| is constant, so P(w(tau)) = P(w0) e^{i rate tau}.
      const cplx w_mid = w0 * std::polar(1.0, rate * 0.5 * h);
      const cplx w_end = w0 * std::polar(1.0, rate * h);
      const cplx pw_mid = pw0 * std::polar(1.0, rate * 0.5 * h);
      const cplx pw_end = pw0 * std::polar(1.0, rate * h);
      auto f = [&](cplx y, cplx w, cplx pw) { return is * (power(y + w, p.alpha) - pw); };
      const cplx k1 = f(vj, w0, pw0);
      const cplx k2 = f(vj + 0.5 * h * k1, w_mid, pw_mid);
      const cplx k3 = f(vj + 0.5 * h * k2, w_mid, pw_mid);
      const cplx k4 = f(vj + h * k3, w_end, pw_end);
      out[j] = vj + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
  }
  const NonlinearityParams pw = unsmoothed(p);
  const Field w_mid = rotate(w_start, 0.5 * h, pw);
  const Field w_end = rotate(w_start, h, pw);
  auto rhs = [&](const Field& w, const Field& y) {
    Field g = g_eps(w, y, p);
    g *= is;
    return g;
  };
  auto axpy = [](const Field& base, double a, const Field& k) {
    Field out = base;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += a * k[j];
    return out;
  };
  const Field k1 = rhs(w_start, v);
  const Field k2 = rhs(w_mid, axpy(v, 0.5 * h, k1));
  const Field k3 = rhs(w_mid, axpy(v, 0.5 * h, k2));
  const Field k4 = rhs(w_end, axpy(v, h, k3));
  Field out = v;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return out;
}

void require_finite(const Field& f, double t) {
  if (!f.all_finite()) throw BlowUpError("non-finite samples in v", t, std::nan(""));
}

void check_hybrid_inputs(const Field& v0, const Field& w0, const TimeStepper& stepper) {
  stepper.params.validate();
  if (!w0.grid().is_torus()) throw std::invalid_argument("w0 must live on the torus");
  if (v0.grid().is_torus()) throw std::invalid_argument("v0 must live on a line grid");
  if (v0.grid().points_per_period() != w0.grid().points_per_period()) {
    throw std::invalid_argument("line and torus grids have different spacings");
  }
  if (stepper.params.eps > 0.0 && stepper.params.alpha != 2.0 && !stepper.params.experimental) {
    throw std::invalid_argument("smoothed modified NLS is defined for alpha = 2 only");
  }
}

class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(HybridTrajectory& traj, const HybridOptions& options, double mass_v0, double mass_w0)
      : traj_(traj), options_(options), mass_v0_(mass_v0), mass_w0_(mass_w0) {}

  void record(const Field& v, const Field& w, double t, bool keep_state) {
    HybridDiagnostics d;
    d.mass_v = squared_l2(v);
    d.mass_w = squared_l2(w);
    d.energy_w = energy(w, unsmoothed(traj_.params)).total;
    d.sup_w = lp_norm(w, kInf);
    running_sup_ = std::max(running_sup_, d.sup_w);
    d.running_sup_w = running_sup_;
    d.boundary_mass_v = boundary_mass(v);
    if (!options_.windows.empty()) {
      const Field u = v + periodize(w, v.grid());
      for (const auto& win : options_.windows) d.window_masses.push_back(window_mass(u, win));
    }
    const double drift = mass_w0_ > 0.0 ? std::abs(d.mass_w - mass_w0_) / mass_w0_ : d.mass_w;
    if (drift > kBlowUpMassDrift) throw BlowUpError("torus mass drift above limit", t, drift);
    if (mass_v0_ > 0.0) {
      const double rel = d.boundary_mass_v / mass_v0_;
      if (rel > options_.boundary_fail) {
        throw BoundaryContaminationError("v reached the wrap-around region, relative boundary mass " +
                                             std::to_string(rel) + " at t = " + std::to_string(t),
                                         rel);
      }
      if (rel > options_.boundary_warn && !warned_) {
        warned_ = true;
        traj_.warnings.push_back("boundary mass of v " + std::to_string(rel) + " of ||v0||^2 at t = " +
                                 std::to_string(t));
      }
    }
    traj_.times.push_back(t);
    traj_.diagnostics.push_back(std::move(d));
    if (keep_state) {
      traj_.state_times.push_back(t);
      traj_.states.push_back(HybridState{w, v, t});
    }
  }

 private:
  HybridTrajectory& traj_;
  const HybridOptions& options_;
  double mass_v0_;
  double mass_w0_;
  double running_sup_ = 0.0;
  bool warned_ = false;
};

}  // namespace

Field coupled_step(const Field& v, const TimeStepper& stepper, const CouplingSamples& samples) {
  require_same_grid(v, samples.w_start);
  require_same_grid(v, samples.w_final_half);
  const double h = 0.5 * stepper.dt;
  const double t0 = v.time().value_or(0.0);
  Field a = v_nonlinear_half(v, samples.w_start, h, stepper.params);
  require_finite(a, t0);
  Field b = free_propagate(a, stepper.dt);
  Field c = v_nonlinear_half(b, samples.w_final_half, h, stepper.params);
  require_finite(c, t0 + stepper.dt);
  c.set_time(t0 + stepper.dt);
  return c;
}

HybridState hybrid_step(const HybridState& state, const TimeStepper& stepper) {
  const NonlinearityParams pw = unsmoothed(stepper.params);
  const double h = 0.5 * stepper.dt;
  const Field w_half = nonlinear_substep(state.w, h, pw);
  const Field w_final_half = free_propagate(w_half, stepper.dt);
  Field w_next = nonlinear_substep(w_final_half, h, pw);
  if (!w_next.all_finite()) throw BlowUpError("non-finite samples in w", state.t + stepper.dt, std::nan(""));
  const Grid& line = state.v.grid();
  CouplingSamples samples{periodize(state.w, line), periodize(w_final_half, line)};
  Field v = state.v;
  v.set_time(state.t);
  Field v_next = coupled_step(v, stepper, samples);
  const double t = state.t + stepper.dt;
  w_next.set_time(t);
  return HybridState{std::move(w_next), std::move(v_next), t};
}

HybridTrajectory solve_hybrid(const Field& v0, const Field& w0, double T, const TimeStepper& stepper,
                              const HybridOptions& options) {
  check_hybrid_inputs(v0, w0, stepper);
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  const int steps = step_count(T, stepper.dt);
  if (options.check_resolution) {
    require_resolved(w0, "torus part w0");
    require_resolved(v0, "localized part v0");
  }
  HybridTrajectory traj;
  traj.dt = stepper.dt;
  traj.params = stepper.params;
  traj.windows = options.windows;
  DiagnosticsRecorder recorder(traj, options, squared_l2(v0), squared_l2(w0));

  HybridState state{w0, v0, 0.0};
  state.w.set_time(0.0);
  state.v.set_time(0.0);
  recorder.record(state.v, state.w, 0.0, true);
  for (int n = 1; n <= steps; ++n) {
    state = hybrid_step(state, stepper);
    state.t = n * stepper.dt;
    recorder.record(state.v, state.w, state.t, n % options.record_every == 0 || n == steps);
  }
  return traj;
}

HybridTrajectory difference_oracle(const Field& v0, const Field& w0, double T,
                                   const TimeStepper& stepper, const HybridOptions& options) {
  check_hybrid_inputs(v0, w0, stepper);
  if (stepper.params.eps != 0.0) {
    throw std::invalid_argument("difference oracle needs eps = 0 (u solves a closed equation only then)");
  }
  if (options.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  const int steps = step_count(T, stepper.dt);
  const Grid& line = v0.grid();
  Field u = v0 + periodize(w0, line);
  if (options.check_resolution) {
    require_resolved(w0, "torus part w0");
    require_resolved(u, "line data u0");
  }
  HybridTrajectory traj;
  traj.dt = stepper.dt;
  traj.params = stepper.params;
  traj.windows = options.windows;
  DiagnosticsRecorder recorder(traj, options, squared_l2(v0), squared_l2(w0));

  Field w = w0;
  const double mass_u0 = squared_l2(u);
  recorder.record(v0, w, 0.0, true);
  for (int n = 1; n <= steps; ++n) {
    const double t = n * stepper.dt;
    u = strang_step(u, stepper);
    w = strang_step(w, stepper);
    const double mass_u = squared_l2(u);
    const double drift = mass_u0 > 0.0 ? std::abs(mass_u - mass_u0) / mass_u0 : mass_u;
    if (drift > kBlowUpMassDrift) throw BlowUpError("line mass drift above limit", t, drift);
    Field v = u - periodize(w, line);
    v.set_time(t);
    w.set_time(t);
    recorder.record(v, w, t, n % options.record_every == 0 || n == steps);
  }
  return traj;
}

PicardResult picard_iterate_v(const Field& v0, const TorusTrajectory& w_traj, double T,
                              const NonlinearityParams& params, const PicardOptions& options) {
  params.validate();
  const int steps = step_count(T, w_traj.dt);
  if (w_traj.states.size() < static_cast<std::size_t>(steps) + 1 ||
      std::abs(w_traj.times[1] - w_traj.dt) > 1e-12) {
    throw std::invalid_argument("w trajectory must be recorded every step up to T");
  }
  const Grid& line = v0.grid();
  std::vector<Field> base;
  std::vector<Field> w_line;
  base.reserve(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) {
    base.push_back(free_propagate(v0, n * w_traj.dt));
    w_line.push_back(periodize(w_traj.states[static_cast<std::size_t>(n)], line));
  }
  auto nonlinearity = [&](std::size_t n, const Field& v) {
    return params.eps == 0.0 ? g_alpha(w_line[n], v, params.alpha) : g_eps(w_line[n], v, params);
  };
  return picard_fixed_point(std::move(base), nonlinearity, params.sign, w_traj.dt, options);
}

double max_l2_distance(const HybridTrajectory& a, const HybridTrajectory& b) {
  const std::size_t n = std::min(a.states.size(), b.states.size());
  double d = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(a.state_times[k] - b.state_times[k]) > 1e-9) {
      throw std::invalid_argument("trajectories are recorded at different times");
    }
    d = std::max(d, lp_norm(a.states[k].v - b.states[k].v, 2.0));
  }
  return d;
}

SweepResult smoothing_sweep(const Field& v0, const Field& w0, double T, const TimeStepper& stepper,
                            const std::vector<double>& eps_list, double final_threshold) {
  SweepResult out;
  out.report.name = "vanishing_smoothing";
  out.report.set_param("T", T);
  out.report.set_param("dt", stepper.dt);
  out.report.set_param("final_threshold", final_threshold);
  TimeStepper ref_stepper = stepper;
  ref_stepper.params.eps = 0.0;
  const auto reference = solve_hybrid(v0, w0, T, ref_stepper);
  bool decreasing = true;
  for (double eps : eps_list) {
    TimeStepper s = stepper;
    s.params.eps = eps;
    const double d = eps == 0.0 ? max_l2_distance(reference, reference)
                                : max_l2_distance(solve_hybrid(v0, w0, T, s), reference);
    if (!out.distances.empty() && !(d < out.distances.back())) decreasing = false;
    out.eps.push_back(eps);
    out.distances.push_back(d);
    out.report.observed.push_back(d);
  }
  out.report.set_param("eps", out.eps);
  if (!out.distances.empty()) out.report.bound.assign(out.distances.size(), kInf);
  if (!out.distances.empty()) out.report.bound.back() = final_threshold;
  out.report.finalize();
  out.report.passed = out.report.passed && decreasing;
  out.report.notes = decreasing ? "distances strictly decreasing" : "distances not strictly decreasing";
  return out;
}

std::vector<double> exp_bound_ratios(const HybridTrajectory& traj) {
  std::vector<double> out;
  if (traj.diagnostics.empty()) return out;
  const double v0 = std::sqrt(traj.diagnostics.front().mass_v);
  for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    const double v = std::sqrt(d.mass_v);
    if (v0 == 0.0) {
      out.push_back(v == 0.0 ? 0.0 : kInf);
      continue;
    }
    out.push_back(v / (v0 * std::exp(d.running_sup_w * traj.times[k])));
  }
  return out;
}

}  // namespace hynls
