#include "hynls/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hynls {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid make_torus_grid(int n_points) {
  if (n_points < 8 || !is_power_of_two(n_points)) {
    throw std::invalid_argument("torus grid needs a power-of-two point count >= 8, got " +
                                std::to_string(n_points));
  }
  return Grid(Domain::torus, 1, n_points);
}

Grid make_line_grid(int periods, int n_per_period) {
  if (periods < 1) {
    throw std::invalid_argument("line grid needs at least one period");
  }
  if (n_per_period < 8 || !is_power_of_two(n_per_period)) {
    throw std::invalid_argument("line grid needs a power-of-two point count per period >= 8, got " +
                                std::to_string(n_per_period));
  }
  return Grid(Domain::line, periods, n_per_period);
}

Grid period_grid(const Grid& grid) { return make_torus_grid(grid.points_per_period()); }

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), cplx{0.0, 0.0}) {}

Field::Field(const Grid& grid, std::vector<cplx> values, std::optional<double> time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " samples but grid has " + std::to_string(grid_.size()));
  }
  if (!all_finite()) {
    throw std::domain_error("field contains non-finite samples");
  }
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(cplx c) {
  for (auto& z : values_) z *= c;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field a) { return a *= c; }

Field sample(const Profile& profile, const Grid& grid) {
  std::vector<cplx> values(grid.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = profile(grid.x(j));
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) {
      throw std::domain_error("profile is not finite at x = " + std::to_string(grid.x(j)));
    }
  }
  return Field(grid, std::move(values));
}

namespace {

// Torus index of line sample j: x_j = -pi*M + j*dx is congruent to -pi + i*dx.
std::size_t torus_index(const Grid& line, long long j) {
  const long long n = line.points_per_period();
  const long long shift = -static_cast<long long>(line.periods() - 1) * (n / 2);
  return static_cast<std::size_t>((((j + shift) % n) + n) % n);
}

}  // namespace

Field periodize(const Field& w, const Grid& target) {
  if (!w.grid().is_torus()) {
    throw std::invalid_argument("periodize expects a torus field");
  }
  if (w.grid().points_per_period() != target.points_per_period()) {
    throw std::invalid_argument("periodize: torus and line spacings differ");
  }
  std::vector<cplx> out(target.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = w[torus_index(target, static_cast<long long>(j))];
  }
  return Field(target, std::move(out), w.time());
}

Field restrict_to_period(const Field& f, int q) {
  const Grid& g = f.grid();
  const auto n = static_cast<long long>(g.points_per_period());
  const auto total = static_cast<long long>(g.size());
  const long long first = static_cast<long long>(g.periods() - 1) * (n / 2) + q * n;
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((((first + i) % total) + total) % total)];
  }
  return Field(period_grid(g), std::move(out), f.time());
}

double squared_l2(const Field& f) {
  double s = 0.0;
  for (const auto& z : f.values()) s += std::norm(z);
  return s * f.grid().dx();
}

double window_mass(const Field& f, const Window& win) {
  const Grid& g = f.grid();
  if (!(win.half_width > 0.0) || win.half_width > 0.5 * g.length() * (1.0 + 1e-14)) {
    throw std::invalid_argument("window half width must lie in (0, L/2]");
  }
  const double dx = g.dx();
  const auto n = static_cast<long long>(g.size());
  const double a = (win.center - win.half_width - g.left()) / dx;
  const double b = (win.center + win.half_width - g.left()) / dx;
  auto density = [&](long long j) {
    const long long idx = ((j % n) + n) % n;
    return std::norm(f[static_cast<std::size_t>(idx)]);
  };
  // Exact integral of the periodic piecewise-linear interpolant of |f|^2.
  double total = 0.0;
  const auto first = static_cast<long long>(std::floor(a));
  const auto last = static_cast<long long>(std::floor(b));
  for (long long j = first; j <= last; ++j) {
    const double lo = std::max(a, static_cast<double>(j)) - static_cast<double>(j);
    const double hi = std::min(b, static_cast<double>(j + 1)) - static_cast<double>(j);
    if (hi <= lo) continue;
    const double g0 = density(j);
    const double g1 = density(j + 1);
    // integral over [lo, hi] of g0 + (g1 - g0) s ds
    total += g0 * (hi - lo) + 0.5 * (g1 - g0) * (hi * hi - lo * lo);
  }
  return total * dx;
}

double boundary_mass(const Field& f, double fraction) {
  const Grid& g = f.grid();
  return window_mass(f, Window{g.left() + g.length(), 0.5 * fraction * g.length()});
}

}  // namespace hynls
