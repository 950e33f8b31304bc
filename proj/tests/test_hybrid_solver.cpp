#include <doctest.h>

#include <cmath>

#include "hynls/errors.hpp"
#include "hynls/hybrid_solver.hpp"
#include "hynls/spectral.hpp"
#include "hynls/verification.hpp"

using namespace hynls;

namespace {

Field gaussian(const Grid& g, double amp, double center, double width, double kappa = 0.0) {
  return sample(
      [=](double x) {
        const double y = (x - center) / width;
        return amp * std::exp(-0.5 * y * y) * std::polar(1.0, kappa * x);
      },
      g);
}

StandardScenario small_scenario() {
  StandardScenario s;
  s.n_points = 128;
  s.periods = 8;
  return s;
}

}  // namespace

TEST_CASE("local time formula") {
  CHECK(local_time(1.0, 1.0, 0.1) == doctest::Approx(0.1));
  const double a = local_time(1.0, 0.0, 0.1);
  const double b = local_time(8.0, 0.0, 0.1);
  CHECK(b / a == doctest::Approx(1.0 / 16.0));
  CHECK(local_time(2.0, 0.0, 0.1) == doctest::Approx(0.1 * std::pow(2.0, -4.0 / 3.0)));
  CHECK(local_time(0.0, 0.0, 0.1) == kInf);
}

TEST_CASE("zero perturbation stays zero and w matches the torus solver") {
  const auto sc = small_scenario();
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (double eps : {0.0, 0.05}) {
      NonlinearityParams p{alpha, Sign::focusing, eps, alpha != 2.0 && eps > 0.0};
      const TimeStepper st{1e-3, p};
      const auto traj = solve_hybrid(Field(sc.line()), sc.w0(), 0.2, st, HybridOptions{50});
      for (const auto& s : traj.states) CHECK(lp_norm(s.v, kInf) <= 1e-10);
      TimeStepper st0 = st;
      st0.params.eps = 0.0;
      const auto w = solve_torus(sc.w0(), 0.2, st0, {50, true});
      REQUIRE(w.states.size() == traj.states.size());
      for (std::size_t k = 0; k < w.states.size(); ++k) CHECK(lp_norm(w.states[k] - traj.states[k].w, kInf) == 0.0);
    }
  }
}

TEST_CASE("decoupled limit is the plain line NLS") {
  const Grid line = make_line_grid(8, 128);
  const Field v0 = gaussian(line, 1.0, 0.0, 0.7);
  for (Sign s : {Sign::focusing, Sign::defocusing}) {
    const TimeStepper st{1e-3, {2.0, s, 0.0, false}};
    const auto traj = solve_hybrid(v0, Field(make_torus_grid(128)), 0.5, st, HybridOptions{500});
    Field u = v0;
    for (int n = 0; n < 500; ++n) u = strang_step(u, st);
    CHECK(lp_norm(traj.states.back().v - u, 2.0) < 1e-8);
    const double m0 = traj.diagnostics.front().mass_v;
    for (const auto& d : traj.diagnostics) CHECK(std::abs(d.mass_v - m0) / m0 < 1e-8);
  }
}

TEST_CASE("constant fields follow the exact coupled solution") {
  // w = e^{it}, u = v + w = 2 e^{2it} for focusing alpha = 2 with w0 = v0 = 1.
  const Grid torus = make_torus_grid(16);
  const Grid line = make_line_grid(2, 16);
  const Field w0 = sample([](double) { return cplx{1.0, 0.0}; }, torus);
  const Field v0 = sample([](double) { return cplx{1.0, 0.0}; }, line);
  HybridOptions opt;
  opt.boundary_warn = opt.boundary_fail = kInf;  // v is not localized here
  auto one_step_error = [&](double dt) {
    const auto traj = solve_hybrid(v0, w0, dt, TimeStepper{dt, {2.0, Sign::focusing, 0.0, false}}, opt);
    const cplx v_exact = 2.0 * std::polar(1.0, 2 * dt) - std::polar(1.0, dt);
    return std::abs(traj.states.back().v[5] - v_exact);
  };
  const double e1 = one_step_error(0.01), e2 = one_step_error(0.005);
  CHECK(e1 < 1e-10);
  // RK4 inside each half-step: local error O(dt^5).
  CHECK(std::log2(e1 / e2) == doctest::Approx(5.0).epsilon(0.05));
  const double dt = 0.01;
  const auto traj = solve_hybrid(v0, w0, dt, TimeStepper{dt, {2.0, Sign::focusing, 0.0, false}}, opt);
  const cplx w_exact = std::polar(1.0, dt);
  CHECK(std::abs(traj.states.back().w[3] - w_exact) < 1e-15);
}

TEST_CASE("difference oracle agrees with the coupled solver") {
  const auto sc = small_scenario();
  const TimeStepper st{1e-3, {2.0, Sign::focusing, 0.0, false}};
  const auto zero = difference_oracle(Field(sc.line()), sc.w0(), 0.2, st, HybridOptions{20});
  for (const auto& s : zero.states) CHECK(lp_norm(s.v, 2.0) < 1e-10);
  const auto a = solve_hybrid(sc.v0(), sc.w0(), 0.5, st, HybridOptions{10});
  const auto b = difference_oracle(sc.v0(), sc.w0(), 0.5, st, HybridOptions{10});
  CHECK(max_l2_distance(a, b) < 1e-6);
  CHECK_THROWS_AS((void)(difference_oracle(sc.v0(), sc.w0(), 0.1, TimeStepper{1e-3, {2.0, Sign::focusing, 0.1, false}})), std::invalid_argument);
}

TEST_CASE("exponential bound along a run") {
  const auto sc = small_scenario();
  for (Sign s : {Sign::focusing, Sign::defocusing}) {
    const auto traj = solve_hybrid(sc.v0(), sc.w0(), 0.5, TimeStepper{1e-3, {2.0, s, 0.0, false}});
    for (double r : exp_bound_ratios(traj)) CHECK(r <= 1.0 + 1e-6);
  }
}

TEST_CASE("boundary guard") {
  const Grid line = make_line_grid(8, 128);
  const Grid torus = make_torus_grid(128);
  // Packet moving right at speed 2 kappa = 30 from x = 10: reaches the outer 10% quickly.
  const Field v0 = gaussian(line, 0.5, 10.0, 0.5, 15.0);
  CHECK_THROWS_AS((void)(solve_hybrid(v0, Field(torus), 0.5, TimeStepper{1e-3, {2.0, Sign::defocusing, 0.0, false}})), BoundaryContaminationError);
  HybridOptions loose;
  loose.boundary_fail = 2.0;
  const auto traj = solve_hybrid(v0, Field(torus), 0.5, TimeStepper{1e-3, {2.0, Sign::defocusing, 0.0, false}}, loose);
  CHECK(!traj.warnings.empty());
}

TEST_CASE("window masses are tracked for u") {
  const auto sc = small_scenario();
  HybridOptions opt;
  opt.windows = {Window{0.0, kPi}, Window{kTwoPi, kPi}};
  const auto traj = solve_hybrid(sc.v0(), sc.w0(), 0.01, TimeStepper{1e-3, {}}, opt);
  const auto& d0 = traj.diagnostics.front();
  REQUIRE(d0.window_masses.size() == 2);
  CHECK(d0.window_masses[0] < 1e-6 * sc.train.tooth_mass());
  CHECK(d0.window_masses[1] == doctest::Approx(sc.train.tooth_mass()).epsilon(1e-6));
}

TEST_CASE("Picard iteration for v") {
  const auto sc = small_scenario();
  const NonlinearityParams p{2.0, Sign::focusing, 0.0, false};
  const TimeStepper st{1e-3, p};
  const auto w_traj = solve_torus(sc.w0(), 0.1, st);
  const auto zero = picard_iterate_v(Field(sc.line()), w_traj, 0.05, p);
  CHECK(zero.converged);
  CHECK(zero.differences.front() == 0.0);

  const double T = std::floor(local_time(sc.v0(), w_traj, kDefaultSafetyC) / 1e-3) * 1e-3;
  REQUIRE(T > 0.0);
  const auto res = picard_iterate_v(sc.v0(), w_traj, T, p);
  CHECK(lp_norm(res.iterates_at_T.front() - free_propagate(sc.v0(), T), kInf) < 1e-14);
  for (double r : res.ratios) CHECK(r < 0.5);
  const auto hyb = solve_hybrid(sc.v0(), sc.w0(), T, st);
  CHECK(lp_norm(hyb.states.back().v - res.final_iterate.back(), 2.0) < 1e-4);

  TorusTrajectory sparse = solve_torus(sc.w0(), 0.1, st, {10, true});
  CHECK_THROWS_AS((void)(picard_iterate_v(sc.v0(), sparse, 0.05, p)), std::invalid_argument);
}

TEST_CASE("smoothing sweep bookkeeping") {
  const auto sc = small_scenario();
  const TimeStepper st{1e-3, {2.0, Sign::focusing, 0.0, false}};
  const auto res = smoothing_sweep(sc.v0(), sc.w0(), 0.1, st, {0.25, 0.0625, 0.0});
  REQUIRE(res.distances.size() == 3);
  CHECK(res.distances.back() == 0.0);
  CHECK(res.distances[0] > res.distances[1]);
}
