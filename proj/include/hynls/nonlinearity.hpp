#pragma once

#include <utility>

#include "hynls/field.hpp"

namespace hynls {

// Sign in front of the nonlinearity in i u_t + u_xx +/- |u|^{alpha-1} u = 0.
enum class Sign { focusing, defocusing };

inline double sign_value(Sign s) { return s == Sign::focusing ? 1.0 : -1.0; }

struct NonlinearityParams {
  double alpha = 2.0;
  Sign sign = Sign::defocusing;
  double eps = 0.0;
  // Allows the smoothed nonlinearities outside the exponent ranges on which
  // they are defined (alpha != 2 in g_eps, alpha > 2 in the torus smoothing).
  bool experimental = false;

  // Throws std::invalid_argument unless 1 <= alpha <= 5 and eps >= 0.
  void validate() const;
};

// |z|^{alpha-1} z, with |z|^0 = 1 so alpha = 1 gives z itself.
cplx power_nonlinearity(cplx z, double alpha);

// G_alpha(w, v) = |v + w|^{alpha-1}(v + w) - |w|^{alpha-1} w, pointwise.
Field g_alpha(const Field& w, const Field& v, double alpha);

// G^eps(w, v) = [|v + w| * phi_eps](v + w) - [|w| * phi_eps] w (quadratic case).
Field g_eps(const Field& w, const Field& v, const NonlinearityParams& params);

// (|w * phi_eps|^{alpha-1}(w * phi_eps)) * phi_eps.
Field torus_smoothed_nonlinearity(const Field& w, const NonlinearityParams& params);

struct SizeEstimate {
  double lhs;
  double rhs;
};

// Both sides of the size estimate
// ||v1+w|^{a-1}(v1+w) - |v2+w|^{a-1}(v2+w)|
//     <= a max{1, 2^{a-1}} (|v1|^{a-1} + |v2|^{a-1} + |w|^{a-1}) |v1 - v2|.
SizeEstimate size_estimate_pair(cplx v1, cplx v2, cplx w, double alpha);

}  // namespace hynls
