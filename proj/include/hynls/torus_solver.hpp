#pragma once

#include <functional>
#include <vector>

#include "hynls/field.hpp"
#include "hynls/nonlinearity.hpp"
#include "hynls/norms.hpp"
#include "hynls/report.hpp"

namespace hynls {

// Strang splitting: half nonlinear substep, full free propagation, half
// nonlinear substep.
struct TimeStepper {
  double dt = 1e-3;
  NonlinearityParams params;
};

inline constexpr double kResolutionTail = 1e-10;
inline constexpr double kBlowUpMassDrift = 1e-3;

// Largest |c_m| with |m| >= (2/3)(N/2), relative to the largest |c_m|.
double spectral_tail_ratio(const Field& f);
// Throws ResolutionError if spectral_tail_ratio(f) >= kResolutionTail.
void require_resolved(const Field& f, const char* what);

// Solves w_t = +/- i N(w) for duration h. For eps = 0 this is the exact
// phase rotation w exp(+/- i h |w|^{alpha-1}); for eps > 0 one RK4 step on
// the smoothed nonlinearity.
Field nonlinear_substep(const Field& w, double h, const NonlinearityParams& params);

// One Strang step on any grid. Throws BlowUpError on non-finite output.
Field strang_step(const Field& w, const TimeStepper& stepper);

struct TorusDiagnostics {
  double mass = 0.0;  // ||w||_2^2
  double h1_norm = 0.0;
  double sup_norm = 0.0;
  EnergyValue energy;
};

struct TorusTrajectory {
  double dt = 0.0;
  NonlinearityParams params;
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<TorusDiagnostics> diagnostics;  // aligned with states
};

struct SolveOptions {
  int record_every = 1;
  bool check_resolution = true;
};

// Number of steps for horizon T; throws std::invalid_argument unless dt
// divides T within rounding.
int step_count(double T, double dt);

TorusDiagnostics torus_diagnostics(const Field& w, const NonlinearityParams& params);

// Integrates the periodic NLS (eps = 0) or its smoothed version (eps > 0,
// started from w0 * phi_eps). Throws BlowUpError on non-finite samples or
// relative mass drift above kBlowUpMassDrift.
TorusTrajectory solve_torus(const Field& w0, double T, const TimeStepper& stepper,
                            const SolveOptions& options = {});

struct PicardResult {
  std::vector<Field> iterates_at_T;   // w_k(T), k = 0..K
  std::vector<double> differences;    // d_k = max_t ||w_{k+1} - w_k||_2
  std::vector<double> ratios;         // d_{k+1} / d_k
  std::vector<Field> final_iterate;   // last iterate at every node
  double dt = 0.0;
  bool converged = false;
};

struct PicardOptions {
  int k_max = 30;
  // Stop once d_k <= abs_tol * (1 + max_t ||w_0(t)||_2).
  double abs_tol = 1e-13;
};

// Generic Duhamel fixed-point iteration u_{k+1}(t_n) = base_n +/- i int_0^{t_n}
// e^{i(t_n-tau) d_x^2} nonlinearity(n, u_k(tau)) dtau on uniform nodes.
PicardResult picard_fixed_point(std::vector<Field> base,
                                const std::function<Field(std::size_t, const Field&)>& nonlinearity,
                                Sign sign, double dt, const PicardOptions& options);

// Duhamel iteration w_{k+1} = e^{it d_x^2}(w0 * phi_eps) +/- i int_0^t
// e^{i(t-tau) d_x^2} N(w_k(tau)) dtau, trapezoid in tau with the stepper's
// dt. Throws DivergenceError if d_k increases three times in a row.
PicardResult picard_iterate_torus(const Field& w0, double T, const TimeStepper& stepper,
                                  const PicardOptions& options = {});

// Local horizon C * ||w0||_{H^1}^{1-alpha} used for the torus iteration.
double torus_local_time(const Field& w0, double alpha, double safety_C);

// Checks ||w(t)||_{H^1}^2 = ||w(0)||_2^2 + 2 E_eps(w(0)) +/- 2/(alpha+1) ||w(t) * phi_eps||^{alpha+1}
// at every recorded time, plus the a priori H^1 bound: directly in the
// defocusing case, through the Gagliardo-Nirenberg constant gn_constant
// when focusing.
PropertyReport h1_growth_report(const TorusTrajectory& traj, double identity_tolerance,
                                double gn_constant);

}  // namespace hynls
