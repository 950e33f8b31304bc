#include "hynls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hynls {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution through the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const auto size = static_cast<int>(n);
    PlanPair p;
    p.forward = fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_1d(size, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p.forward == nullptr || p.backward == nullptr) {
      throw std::runtime_error("FFTW failed to create a plan");
    }
    return plans_.emplace(n, p).first->second;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

void execute(std::span<cplx> data, bool forward_direction) {
  const PlanPair& p = PlanCache::instance().get(data.size());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(forward_direction ? p.forward : p.backward, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (auto& z : data) z *= scale;
}

// exp(-i xi_m * left) with left = -pi M and xi_m = m / M is (-1)^m.
double phase_sign(long long m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double continuum_weight(const Grid& grid) { return grid.dx(); }

double continuum_coefficient_scale(const Grid& grid) {
  return grid.dx() * std::sqrt(static_cast<double>(grid.size()) / kTwoPi);
}

void fft_forward_inplace(std::span<cplx> data) { execute(data, true); }
void fft_inverse_inplace(std::span<cplx> data) { execute(data, false); }

FrequencyField::FrequencyField(const Grid& grid, std::vector<cplx> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("coefficient count does not match grid size");
  }
}

cplx FrequencyField::at_mode(long long m) const {
  const auto n = static_cast<long long>(coeffs_.size());
  if (m < -n / 2 || m >= n / 2) {
    throw std::out_of_range("mode outside the resolved band");
  }
  return coeffs_[static_cast<std::size_t>(m >= 0 ? m : m + n)];
}

FrequencyField forward(const Field& f) {
  std::vector<cplx> c(f.values().begin(), f.values().end());
  fft_forward_inplace(c);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= phase_sign(mode_of_index(i, c.size()));
  return FrequencyField(f.grid(), std::move(c));
}

Field inverse(const FrequencyField& F) {
  std::vector<cplx> v(F.coefficients().begin(), F.coefficients().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= phase_sign(mode_of_index(i, v.size()));
  fft_inverse_inplace(v);
  return Field(F.grid(), std::move(v));
}

Field apply_multiplier(const Field& f, const std::function<cplx(double)>& symbol) {
  std::vector<cplx> c(f.values().begin(), f.values().end());
  fft_forward_inplace(c);
  const double dk = f.grid().dk();
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] *= symbol(static_cast<double>(mode_of_index(i, c.size())) * dk);
  }
  fft_inverse_inplace(c);
  return Field(f.grid(), std::move(c), f.time());
}

Field free_propagate(const Field& f, double t) {
  return apply_multiplier(f, [t](double xi) { return std::polar(1.0, -xi * xi * t); });
}

Field heat_smooth(const Field& f, double eps) {
  if (eps < 0.0) throw std::invalid_argument("smoothing width must be nonnegative");
  if (eps == 0.0) return f;
  return apply_multiplier(f, [eps](double xi) { return cplx{std::exp(-eps * xi * xi), 0.0}; });
}

Field sobolev_apply(const Field& f, double s) {
  if (s == 0.0) return f;
  return apply_multiplier(f, [s](double xi) { return cplx{std::pow(1.0 + xi * xi, 0.5 * s), 0.0}; });
}

Field derivative(const Field& f) {
  const auto n = static_cast<long long>(f.size());
  return apply_multiplier(f, [n, dk = f.grid().dk()](double xi) {
    // The Nyquist mode has no consistent real derivative; drop it.
    if (std::abs(std::abs(xi) - 0.5 * static_cast<double>(n) * dk) < 0.25 * dk) return cplx{0.0, 0.0};
    return cplx{0.0, xi};
  });
}

}  // namespace hynls
