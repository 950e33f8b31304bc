#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hynls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Domain { torus, line };

// Uniform left-closed sampling x_j = -pi*M + j*dx of either the torus
// [-pi, pi) (M = 1) or a truncated line made of M torus periods.
class Grid {
 public:
  Domain domain() const { return domain_; }
  bool is_torus() const { return domain_ == Domain::torus; }
  int periods() const { return periods_; }
  int points_per_period() const { return n_per_period_; }
  std::size_t size() const {
    return static_cast<std::size_t>(periods_) * static_cast<std::size_t>(n_per_period_);
  }
  double dx() const { return kTwoPi / n_per_period_; }
  double length() const { return kTwoPi * periods_; }
  double left() const { return -kPi * periods_; }
  double x(std::size_t j) const { return left() + static_cast<double>(j) * dx(); }
  // Spacing of the discrete wavenumbers, 1/M.
  double dk() const { return 1.0 / periods_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(Domain domain, int periods, int n_per_period)
      : domain_(domain), periods_(periods), n_per_period_(n_per_period) {}

  friend Grid make_torus_grid(int n_points);
  friend Grid make_line_grid(int periods, int n_per_period);

  Domain domain_;
  int periods_;
  int n_per_period_;
};

// Throws std::invalid_argument unless n_points is a power of two >= 8.
Grid make_torus_grid(int n_points);
// Throws std::invalid_argument for periods < 1 or a non power-of-two n_per_period.
Grid make_line_grid(int periods, int n_per_period);

// The torus whose sampling matches one period of `grid`.
Grid period_grid(const Grid& grid);

bool is_power_of_two(long long n);

// Complex samples on a grid. All samples are finite.
class Field {
 public:
  explicit Field(const Grid& grid);  // zero field
  Field(const Grid& grid, std::vector<cplx> values, std::optional<double> time = std::nullopt);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }
  cplx& operator[](std::size_t j) { return values_[j]; }
  std::optional<double> time() const { return time_; }
  void set_time(std::optional<double> t) { time_ = t; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx c);

 private:
  Grid grid_;
  std::vector<cplx> values_;
  std::optional<double> time_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field a);

// Throws std::invalid_argument if the fields live on different grids.
void require_same_grid(const Field& a, const Field& b);

struct Window {
  double center;
  double half_width;
};

using Profile = std::function<cplx(double)>;

// Throws std::domain_error if any sample is not finite.
Field sample(const Profile& profile, const Grid& grid);

// Repeats torus samples over every period of `target`. Throws
// std::invalid_argument if `w` is not a torus field or the spacings differ.
Field periodize(const Field& w, const Grid& target);

// Samples with x in [2*pi*q - pi, 2*pi*q + pi) (periodic indexing) as a torus field.
// Inverse of periodize for every q.
Field restrict_to_period(const Field& f, int q);

// Integral of the piecewise-linear interpolant of |f|^2 over
// [center - half_width, center + half_width], taken periodically. Throws
// std::invalid_argument unless 0 < half_width <= L/2.
double window_mass(const Field& f, const Window& win);

// Mass in the outer `fraction` of the domain, |x| >= (1 - fraction) * L / 2.
double boundary_mass(const Field& f, double fraction = 0.1);

double squared_l2(const Field& f);

}  // namespace hynls
