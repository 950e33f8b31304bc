#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hynls/hybrid_solver.hpp"
#include "hynls/report.hpp"
#include "hynls/scenarios.hpp"
#include "hynls/torus_solver.hpp"

namespace hynls {

PropertyReport check_size_estimate(int corpus_size, const std::vector<double>& alphas, std::uint64_t seed);

// Given samples of A, B(t_n) and u(t_n) on a uniform grid, checks the
// hypothesis u <= A + int_0^t B u (trapezoid, relative slack
// hypothesis_slack) and then the conclusion u <= A exp(int_0^t B).
PropertyReport check_gronwall_integral(double A, const std::vector<double>& B, const std::vector<double>& u,
                                       double dt, double hypothesis_slack = 1e-9);

// Synthetic corpus: smooth random B >= 0, u solving u' = theta B u with
// theta in [0, 0.9] and u(0) <= 0.9 A, so the hypothesis holds with margin.
PropertyReport check_gronwall_integral_corpus(int corpus_size, std::uint64_t seed);

// Finite-difference form of (1/2) d/dt ||v||^2 <= ||w||_inf ||v||^2 on run
// data, with declared slack 10 dt (1 + ||v||^2). With diagnostic_only the
// report records but always passes.
PropertyReport check_gronwall_differential(const HybridTrajectory& traj, bool diagnostic_only = false);

// ||v(t)||_2 <= ||v0||_2 exp(sup_{[0,t]} ||w||_inf t) (1 + tolerance) at every step.
PropertyReport check_exp_bound(const HybridTrajectory& traj, double tolerance = 1e-6);

// Records ||v(t)|| / (||v0|| e^{||w|| t}) and flags when it exceeds one, for
// exponents where the exponential bound is not proven. Never fails.
PropertyReport failure_global_diagnostic(const HybridTrajectory& traj);

// Relative drift of mass and of E_eps over the trajectory.
PropertyReport check_conservation(const TorusTrajectory& traj, double mass_tolerance = 1e-8,
                                  double energy_tolerance = 1e-6);

// ||w||_{alpha+1}^{alpha+1} / (||w||_2^{(alpha+3)/2} ||w||_{H^1}^{(alpha-1)/2}).
double gn_ratio(const Field& w, double alpha);
double fit_gn_constant(int corpus_size, double alpha, std::uint64_t seed);
PropertyReport check_gn(int corpus_size, double alpha, std::uint64_t seed, double constant);

// ||v w||_{H^s} / (||v||_{H^s} ||w||_{H^{s+1}(T)}) with w periodized.
double bilinear_ratio(const Field& v, const Field& w_torus, double s);
double fit_bilinear_constant(int corpus_size, double s, std::uint64_t seed);
PropertyReport check_bilinear(int corpus_size, double s, std::uint64_t seed, double constant);

struct StrichartzSettings {
  int periods = 16;
  int n_per_period = 256;
  double T = 1.0;
  int n_t = 200;
  double base_width = 0.25;
  std::vector<double> scales{1.0, 1.5, 2.0};
  double stability = 0.05;
};

// Homogeneous ratios: refinement in space and time plus the L^2-critical
// rescaling family; inhomogeneous ratios with random Gaussian forcing and
// dual exponents rho = r', gamma = gamma_a(rho), under time refinement.
PropertyReport check_strichartz(int corpus_size, const std::vector<double>& r_list, std::uint64_t seed,
                                const StrichartzSettings& settings = {});

// L^p contraction (p = 1, 2, 4, inf), H^s / homogeneous H^s contraction and
// the smoothing bound ||phi_eps * f||_{H^s} <= sup_k <k>^s e^{-eps k^2} ||f||_2.
PropertyReport check_smoothing_lemmas(int corpus_size, std::uint64_t seed);

// Standard tooth scenario: unit-peak teeth of width 0.35, one per period,
// v0 removing the tooth at x = 0; torus n = 256, line M = 16, dt = 1e-3.
struct StandardScenario {
  ToothTrain train{};
  int n_points = 256;
  int periods = 16;
  double dt = 1e-3;
  Grid torus() const { return make_torus_grid(n_points); }
  Grid line() const { return make_line_grid(periods, n_points); }
  Field w0() const { return make_tooth_train(train, torus()); }
  Field v0() const { return make_tooth_removal(train, line(), 0, 1); }
};

struct ExpBoundCase {
  ToothTrain train;
  int first_slot = 0;
  int removed = 1;
  double removal_scale = 1.0;
  Sign sign = Sign::defocusing;
};

// Seeded corpus of tooth trains for the exponential bound.
std::vector<ExpBoundCase> exp_bound_corpus(int size, std::uint64_t seed);

struct SuiteConfig {
  std::uint64_t seed = 20241014;
  int corpus_size = 1000;
  int exp_bound_cases = 20;
  double horizon = 1.0;
  // Multiplies every declared tolerance; 0 forces the strict checks to fail.
  double tolerance_scale = 1.0;
  std::vector<std::string> only;  // empty: all checks
};

std::vector<std::string> suite_check_names();
std::vector<PropertyReport> run_suite(const SuiteConfig& config);

}  // namespace hynls
