#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hynls/field.hpp"
#include "hynls/report.hpp"
#include "hynls/torus_solver.hpp"

namespace hynls {

// u = v + w with w on the torus and v on the truncated line.
struct HybridState {
  Field w;
  Field v;
  double t = 0.0;
};

struct HybridDiagnostics {
  double mass_v = 0.0;          // ||v||_2^2
  double mass_w = 0.0;          // ||w||_{L^2(T)}^2
  double energy_w = 0.0;        // E_0(w)
  double sup_w = 0.0;           // ||w(t)||_inf
  double running_sup_w = 0.0;   // sup over [0, t] of ||w||_inf
  double boundary_mass_v = 0.0; // mass of v in the outer 10% of the line
  std::vector<double> window_masses;  // mass of u = v + w in each tracked window
};

struct HybridTrajectory {
  double dt = 0.0;
  NonlinearityParams params;
  std::vector<Window> windows;
  // Every step.
  std::vector<double> times;
  std::vector<HybridDiagnostics> diagnostics;
  // Every record_every steps, plus the final step.
  std::vector<double> state_times;
  std::vector<HybridState> states;
  std::vector<std::string> warnings;
};

struct HybridOptions {
  int record_every = 1;
  bool check_resolution = true;
  std::vector<Window> windows;
  // Boundary mass of v relative to ||v0||^2: warn above the first, fail above the second.
  double boundary_warn = 1e-6;
  double boundary_fail = 1e-3;
};

inline constexpr double kDefaultSafetyC = 0.1;

// C * min(||v0||_2^{-4/3}, ||w||_{L^inf_t L^inf_x}^{-1}); +inf if both norms vanish.
double local_time(double v0_l2, double w_sup, double safety_C = kDefaultSafetyC);
double local_time(const Field& v0, const TorusTrajectory& w_traj, double safety_C = kDefaultSafetyC);

// w at the two points of a torus Strang step where v's nonlinear half-steps
// start: the step's initial state and the state entering the final half-step.
// Both periodized onto the line.
struct CouplingSamples {
  Field w_start;
  Field w_final_half;
};

// Strang step for v in i v_t + v_xx +/- G(w, v) = 0. Within each nonlinear
// half-step w follows its own exact nonlinear flow w exp(+/- i tau |w|^{alpha-1})
// and v is advanced by RK4 on v_t = +/- i G(w(tau), v); G is G_alpha for
// eps = 0 and G^eps otherwise.
Field coupled_step(const Field& v, const TimeStepper& stepper, const CouplingSamples& samples);

// Advances (w, v) by one step; w by the unsmoothed torus splitting.
HybridState hybrid_step(const HybridState& state, const TimeStepper& stepper);

// Runs the torus and line solvers in lockstep. stepper.params.eps enters
// only the v equation; w always solves the unsmoothed periodic NLS.
HybridTrajectory solve_hybrid(const Field& v0, const Field& w0, double T, const TimeStepper& stepper,
                              const HybridOptions& options = {});

// Independent route: solves u on the line from v0 + periodize(w0) with the
// plain splitting, w on the torus, and sets v = u - periodize(w). eps must be 0.
HybridTrajectory difference_oracle(const Field& v0, const Field& w0, double T,
                                   const TimeStepper& stepper, const HybridOptions& options = {});

// Duhamel iteration for v on the nodes of w_traj (which must be recorded
// every step). The iterate is v_{k+1} = e^{it d_x^2} v0 +/- i int G(w, v_k).
PicardResult picard_iterate_v(const Field& v0, const TorusTrajectory& w_traj, double T,
                              const NonlinearityParams& params, const PicardOptions& options = {});

// max over common recorded times of ||a.v - b.v||_2.
double max_l2_distance(const HybridTrajectory& a, const HybridTrajectory& b);

struct SweepResult {
  std::vector<double> eps;
  std::vector<double> distances;
  PropertyReport report;
};

// Runs solve_hybrid for every eps in eps_list (nonincreasing) and reports
// max_t ||v^eps - v^0||_2. The report passes if the distances strictly
// decrease and the last one is below final_threshold.
SweepResult smoothing_sweep(const Field& v0, const Field& w0, double T, const TimeStepper& stepper,
                            const std::vector<double>& eps_list, double final_threshold = 1e-3);

// ||v(t)||_2 / (||v0||_2 exp(sup_{[0,t]} ||w||_inf * t)) at every step.
std::vector<double> exp_bound_ratios(const HybridTrajectory& traj);

}  // namespace hynls
