#include <doctest.h>

#include <cmath>
#include <random>

#include "hynls/nonlinearity.hpp"
#include "hynls/norms.hpp"
#include "hynls/spectral.hpp"

using namespace hynls;

namespace {

Field constant(const Grid& g, cplx c) {
  return sample([c](double) { return c; }, g);
}

double max_err(const Field& a, const Field& b) {
  double e = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - b[j]));
  return e;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW(NonlinearityParams{1.0, Sign::focusing, 0.0, false}.validate());
  CHECK_NOTHROW(NonlinearityParams{5.0, Sign::focusing, 0.0, false}.validate());
  CHECK_THROWS_AS((void)(NonlinearityParams{0.9, Sign::focusing, 0.0, false}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((void)(NonlinearityParams{5.5, Sign::focusing, 0.0, false}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((void)(NonlinearityParams{2.0, Sign::focusing, -1.0, false}.validate()), std::invalid_argument);
  CHECK(sign_value(Sign::focusing) == 1.0);
  CHECK(sign_value(Sign::defocusing) == -1.0);
}

TEST_CASE("power nonlinearity at zero") {
  CHECK(power_nonlinearity(cplx{0.0, 0.0}, 1.0) == cplx{0.0, 0.0});
  CHECK(power_nonlinearity(cplx{2.0, 1.0}, 1.0) == cplx{2.0, 1.0});
  CHECK(power_nonlinearity(cplx{0.0, 0.0}, 1.5) == cplx{0.0, 0.0});
}

TEST_CASE("g_alpha examples") {
  const Grid t = make_torus_grid(16);
  const Field w = sample([](double x) { return cplx{std::cos(x), 0.3}; }, t);
  for (double a : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    const Field g = g_alpha(w, Field(t), a);
    for (auto z : g.values()) CHECK(z == cplx{0.0, 0.0});
  }
  const Field gi = g_alpha(Field(t), constant(t, {0.0, 1.0}), 3.0);
  CHECK(std::abs(gi[3] - cplx{0.0, 1.0}) < 1e-15);
  const Field g3 = g_alpha(constant(t, 1.0), constant(t, 1.0), 2.0);
  CHECK(std::abs(g3[0] - 3.0) < 1e-15);
  CHECK_THROWS_AS((void)(g_alpha(w, Field(make_torus_grid(32)), 2.0)), std::invalid_argument);
}

TEST_CASE("g_alpha gauge symmetry") {
  std::mt19937_64 rng(9);
  const Grid t = make_torus_grid(64);
  const Field w = random_hs_field(t, 1.0, rng);
  const Field v = random_hs_field(t, 0.0, rng);
  for (double a : {1.0, 1.5, 2.0, 3.0}) {
    for (double th : {0.3, 2.0, -1.1}) {
      const cplx p = std::polar(1.0, th);
      const Field lhs = g_alpha(p * w, p * v, a);
      const Field rhs = p * g_alpha(w, v, a);
      CHECK(max_err(lhs, rhs) < 1e-13);
    }
  }
}

TEST_CASE("size estimate holds pointwise on fields") {
  std::mt19937_64 rng(4);
  const Grid t = make_torus_grid(128);
  const Field w = random_hs_field(t, 1.0, rng);
  const Field v1 = 3.0 * random_hs_field(t, 0.0, rng);
  const Field v2 = random_hs_field(t, 0.0, rng);
  for (double a : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    const Field d = g_alpha(w, v1, a) - g_alpha(w, v2, a);
    for (std::size_t j = 0; j < t.size(); ++j) {
      const auto e = size_estimate_pair(v1[j] + 0.0, v2[j], w[j], a);
      CHECK(std::abs(d[j]) == doctest::Approx(e.lhs).epsilon(1e-12));
      CHECK(e.lhs <= e.rhs * (1 + 1e-12));
    }
  }
}

TEST_CASE("size estimate examples") {
  const auto same = size_estimate_pair({1.0, 2.0}, {1.0, 2.0}, {0.5, 0.0}, 2.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  const auto e = size_estimate_pair({1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, 2.0);
  CHECK(e.lhs == doctest::Approx(1.0));
  CHECK(e.rhs == doctest::Approx(4.0));
}

TEST_CASE("g_eps") {
  const Grid t = make_torus_grid(64);
  std::mt19937_64 rng(1);
  const Field w = random_hs_field(t, 1.0, rng);
  const Field v = random_hs_field(t, 1.0, rng);
  for (double eps : {0.0, 0.1, 1.0}) {
    const Field g = g_eps(w, Field(t), NonlinearityParams{2.0, Sign::focusing, eps, false});
    CHECK(lp_norm(g, kInf) < 1e-15);
  }
  const Field g0 = g_eps(constant(t, 1.0), constant(t, 1.0), NonlinearityParams{2.0, Sign::focusing, 0.0, false});
  CHECK(std::abs(g0[5] - 3.0) < 1e-15);
  CHECK(max_err(g_eps(w, v, NonlinearityParams{2.0, Sign::focusing, 0.0, false}), g_alpha(w, v, 2.0)) == 0.0);
  const Field a = constant(t, {0.4, 0.2});
  const Field b = constant(t, {-0.1, 0.7});
  const Field ref = g_alpha(a, b, 2.0);
  CHECK(max_err(g_eps(a, b, NonlinearityParams{2.0, Sign::focusing, 0.3, false}), ref) < 1e-14);
  CHECK_THROWS_AS((void)(g_eps(w, v, NonlinearityParams{3.0, Sign::focusing, 0.1, false})), std::invalid_argument);
  CHECK_NOTHROW(g_eps(w, v, NonlinearityParams{3.0, Sign::focusing, 0.1, true}));
}

TEST_CASE("g_eps approaches g_alpha monotonically") {
  const Grid t = make_torus_grid(128);
  std::mt19937_64 rng(21);
  const Field w = random_hs_field(t, 1.0, rng);
  const Field v = random_hs_field(t, 1.0, rng);
  const Field ref = g_alpha(w, v, 2.0);
  double prev = kInf;
  for (int k = 1; k <= 10; ++k) {
    const double e =
        lp_norm(g_eps(w, v, NonlinearityParams{2.0, Sign::focusing, std::ldexp(1.0, -k), false}) - ref, 2.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("smoothed torus nonlinearity") {
  const Grid t = make_torus_grid(64);
  CHECK(lp_norm(torus_smoothed_nonlinearity(Field(t), {2.0, Sign::focusing, 0.3, false}), kInf) == 0.0);
  std::mt19937_64 rng(2);
  const Field w = random_hs_field(t, 1.0, rng);
  Field plain(t);
  for (std::size_t j = 0; j < t.size(); ++j) plain[j] = power_nonlinearity(w[j], 1.5);
  CHECK(max_err(torus_smoothed_nonlinearity(w, {1.5, Sign::focusing, 0.0, false}), plain) < 1e-15);
  const Field one = constant(t, 1.0);
  CHECK(max_err(torus_smoothed_nonlinearity(one, {2.0, Sign::focusing, 0.7, false}), one) < 1e-14);
  CHECK_THROWS_AS((void)(torus_smoothed_nonlinearity(w, {3.0, Sign::focusing, 0.1, false})), std::invalid_argument);
}
