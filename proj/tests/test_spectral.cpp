#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "hynls/norms.hpp"
#include "hynls/spectral.hpp"

using namespace hynls;

namespace {

double max_err(const Field& a, const Field& b) {
  double e = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - b[j]));
  return e;
}

Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> v(g.size());
  for (auto& z : v) z = {n(rng), n(rng)};
  return Field(g, std::move(v));
}

}  // namespace

TEST_CASE("forward of zero and of a single mode") {
  const Grid t = make_torus_grid(64);
  const auto Z = forward(Field(t));
  for (auto c : Z.coefficients()) CHECK(c == cplx{0.0, 0.0});
  const Field e3 = sample([](double x) { return std::polar(1.0, 3 * x); }, t);
  const auto F = forward(e3);
  for (long long m = -32; m < 32; ++m) {
    if (m == 3) {
      CHECK(std::abs(F.at_mode(m)) == doctest::Approx(8.0).epsilon(1e-13));  // sqrt(N)
      CHECK(std::abs(F.at_mode(m) - cplx{8.0, 0.0}) < 1e-12);
    } else {
      CHECK(std::abs(F.at_mode(m)) < 1e-12);
    }
  }
}

TEST_CASE("round trip and Parseval on random fields") {
  for (const Grid& g : {make_torus_grid(256), make_line_grid(8, 128)}) {
    const Field f = random_field(g, 7);
    const auto F = forward(f);
    CHECK(max_err(inverse(F), f) < 1e-12 * lp_norm(f, kInf));
    double spec = 0.0;
    for (auto c : F.coefficients()) spec += std::norm(c);
    CHECK(spec * continuum_weight(g) == doctest::Approx(squared_l2(f)).epsilon(1e-12));
  }
}

TEST_CASE("line wavenumbers are j/M with Nyquist negative") {
  const Grid l = make_line_grid(4, 16);
  const auto F = forward(Field(l));
  CHECK(F.wavenumber(1) == doctest::Approx(0.25));
  CHECK(F.mode(32) == -32);
  CHECK(F.wavenumber(32) == doctest::Approx(-8.0));
}

TEST_CASE("free propagation") {
  const Grid t = make_torus_grid(128);
  const Field c = sample([](double) { return cplx{0.7, 0.2}; }, t);
  CHECK(max_err(free_propagate(c, 3.3), c) < 1e-14);
  const Field e = sample([](double x) { return std::polar(1.0, 5 * x); }, t);
  const Field expect = sample([](double x) { return std::polar(1.0, 5 * x - 25 * 0.3); }, t);
  CHECK(max_err(free_propagate(e, 0.3), expect) < 1e-12);
  const Field f = random_field(t, 3);
  CHECK(lp_norm(free_propagate(f, 1.7), 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
  CHECK(max_err(free_propagate(free_propagate(f, 0.4), 0.9), free_propagate(f, 1.3)) < 1e-11);
}

TEST_CASE("free Gaussian matches the closed form") {
  const Grid l = make_line_grid(16, 512);
  const double s2 = 0.25;
  const double t = 0.1;
  const Field g0 = sample([&](double x) { return cplx{std::exp(-x * x / (2 * s2)), 0.0}; }, l);
  const Field exact = sample(
      [&](double x) {
        const cplx a = s2 + cplx{0.0, 2.0 * t};
        return std::sqrt(s2 / a) * std::exp(-x * x / (2.0 * a));
      },
      l);
  CHECK(max_err(free_propagate(g0, t), exact) < 1e-8);
}

TEST_CASE("heat smoothing") {
  const Grid t = make_torus_grid(128);
  const Field f = random_field(t, 11);
  CHECK(max_err(heat_smooth(f, 0.0), f) == 0.0);
  const Field c = sample([](double) { return cplx{1.5, -0.5}; }, t);
  CHECK(max_err(heat_smooth(c, 2.0), c) < 1e-14);
  CHECK_THROWS_AS((void)(heat_smooth(f, -1e-3)), std::invalid_argument);
  // Mean preserved, L^2 non-increasing.
  const auto F0 = forward(f);
  const auto F1 = forward(heat_smooth(f, 0.05));
  CHECK(std::abs(F0.at_mode(0) - F1.at_mode(0)) < 1e-12);
  CHECK(lp_norm(heat_smooth(f, 0.05), 2.0) <= lp_norm(f, 2.0));
}

TEST_CASE("heat smoothing equals convolution with the periodized kernel") {
  const Grid t = make_torus_grid(128);
  const double eps = 1.0;
  const Field e = sample([](double x) { return std::polar(1.0, x); }, t);
  const Field expect = sample([](double x) { return std::exp(-1.0) * std::polar(1.0, x); }, t);
  CHECK(max_err(heat_smooth(e, eps), expect) < 1e-12);
  auto phi = [&](double x) {
    double acc = 0.0;
    for (int k = -10; k <= 10; ++k) {
      const double y = x - k * kTwoPi;
      acc += std::exp(-y * y / (4 * eps)) / std::sqrt(4 * kPi * eps);
    }
    return acc;
  };
  Field conv(t);
  for (std::size_t j = 0; j < t.size(); ++j) {
    for (std::size_t k = 0; k < t.size(); ++k) conv[j] += phi(t.x(j) - t.x(k)) * e[k] * t.dx();
  }
  CHECK(max_err(conv, expect) < 1e-8);
}

TEST_CASE("heat smoothing converges monotonically as eps -> 0") {
  std::mt19937_64 rng(5);
  const Field f = random_hs_field(make_torus_grid(256), 1.0, rng);
  double prev = kInf;
  for (int k = 1; k <= 12; ++k) {
    const double e = lp_norm(heat_smooth(f, std::ldexp(1.0, -k)) - f, 2.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("Sobolev multiplier") {
  const Grid t = make_torus_grid(64);
  const Field f = random_field(t, 2);
  CHECK(max_err(sobolev_apply(f, 0.0), f) < 1e-13);
  const Field c = sample([](double) { return cplx{3.0, 0.0}; }, t);
  CHECK(max_err(sobolev_apply(c, 2.5), c) < 1e-13);
  const Field e2 = sample([](double x) { return std::polar(1.0, 2 * x); }, t);
  const Field s5 = sample([](double x) { return std::sqrt(5.0) * std::polar(1.0, 2 * x); }, t);
  CHECK(max_err(sobolev_apply(e2, 1.0), s5) < 1e-12);
  CHECK(max_err(sobolev_apply(sobolev_apply(f, 1.3), -1.3), f) < 1e-10);
}

TEST_CASE("derivative of a plane wave") {
  const Grid t = make_torus_grid(64);
  const Field e = sample([](double x) { return std::polar(1.0, 4 * x); }, t);
  const Field d = derivative(e);
  const Field expect = sample([](double x) { return cplx{0.0, 4.0} * std::polar(1.0, 4 * x); }, t);
  CHECK(max_err(d, expect) < 1e-12);
}

TEST_CASE("concurrent transforms agree with sequential ones") {
  const Grid g = make_line_grid(4, 256);
  std::vector<Field> in;
  for (int i = 0; i < 4; ++i) in.push_back(random_field(g, 100 + i));
  std::vector<Field> seq, par(4, Field(g));
  for (const auto& f : in) seq.push_back(free_propagate(f, 0.37));
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) threads.emplace_back([&, i] { par[i] = free_propagate(in[i], 0.37); });
  for (auto& th : threads) th.join();
  for (int i = 0; i < 4; ++i) CHECK(max_err(seq[i], par[i]) == 0.0);
}
