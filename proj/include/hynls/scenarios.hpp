#pragma once

#include <cstdint>
#include <vector>

#include "hynls/field.hpp"

namespace hynls {

// Periodic train of Gaussian teeth amplitude * exp(-y^2 / (2 width^2)),
// `teeth_per_period` equally spaced teeth per 2 pi, one of them centered at 0.
struct ToothTrain {
  double amplitude = 1.0;
  double width = 0.35;
  int teeth_per_period = 1;

  double spacing() const { return kTwoPi / teeth_per_period; }
  double tooth_mass() const;  // ||one tooth||_2^2 on the line
};

// Single tooth profile centered at `center`, not periodized.
cplx tooth_profile(const ToothTrain& train, double center, double x);

Field make_tooth_train(const ToothTrain& train, const Grid& torus);

// v0 = -scale * (sum of teeth at slots first_slot .. first_slot + count - 1),
// slot s sitting at x = s * spacing.
Field make_tooth_removal(const ToothTrain& train, const Grid& line, int first_slot, int count,
                         double scale = 1.0);

// Window covering one tooth slot, half width = half the spacing.
Window slot_window(const ToothTrain& train, int slot);

}  // namespace hynls
