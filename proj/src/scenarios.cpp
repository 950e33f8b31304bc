#include "hynls/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace hynls {

double ToothTrain::tooth_mass() const {
  // int amplitude^2 exp(-x^2 / width^2) dx
  return amplitude * amplitude * width * std::sqrt(kPi);
}

cplx tooth_profile(const ToothTrain& train, double center, double x) {
  const double y = x - center;
  return {train.amplitude * std::exp(-y * y / (2.0 * train.width * train.width)), 0.0};
}

Field make_tooth_train(const ToothTrain& train, const Grid& torus) {
  if (!torus.is_torus()) throw std::invalid_argument("tooth train lives on the torus");
  if (train.teeth_per_period < 1) throw std::invalid_argument("need at least one tooth per period");
  const double spacing = train.spacing();
  return sample(
      [&](double x) {
        // Sum over the nearest images; farther ones are below double precision.
        const double y = std::remainder(x, spacing);
        cplx acc{0.0, 0.0};
        for (int k = -2; k <= 2; ++k) acc += tooth_profile(train, k * spacing, y);
        return acc;
      },
      torus);
}

Field make_tooth_removal(const ToothTrain& train, const Grid& line, int first_slot, int count,
                         double scale) {
  if (count < 0) throw std::invalid_argument("negative tooth count");
  return sample(
      [&](double x) {
        cplx acc{0.0, 0.0};
        for (int s = first_slot; s < first_slot + count; ++s) {
          acc -= scale * tooth_profile(train, s * train.spacing(), x);
        }
        return acc;
      },
      line);
}

Window slot_window(const ToothTrain& train, int slot) {
  return Window{slot * train.spacing(), 0.5 * train.spacing()};
}

}  // namespace hynls
