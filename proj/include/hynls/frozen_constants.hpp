#pragma once

// Constants for inequalities whose constants are not known in closed form.
// Each value is twice the largest ratio observed over a seeded fitting corpus
// (`hynls fit-constants`). Assertions run on corpora drawn with other seeds.
//
// Version 1, fitted 2026-10-14. Fitting corpus: 1000 samples, seed 1, torus n = 256 for GN;
// line M = 8 with 128 points per period and torus n = 128 for the bilinear estimate.
// Values below are the raw fitted maxima; the constants are kHeadroom times them.

namespace hynls::frozen {

inline constexpr int kVersion = 1;
inline constexpr double kHeadroom = 2.0;

// Gagliardo-Nirenberg, ||w||_{a+1}^{a+1} <= C ||w||_2^{(a+3)/2} ||w||_{H^1}^{(a-1)/2}.
inline constexpr double kGnFit_alpha1_5 = 0.67497661796427;
inline constexpr double kGnFit_alpha2 = 0.46866953798524252;
inline constexpr double kGnFit_alpha3 = 0.241896817284879;

// ||v w||_{H^s(R)} <= C ||v||_{H^s(R)} ||w||_{H^{s+1}(T)}.
inline constexpr double kBilinearFit_s0 = 0.44957525142626636;
inline constexpr double kBilinearFit_s1 = 0.41933871378745269;

inline constexpr double gn_constant(double alpha) {
  if (alpha == 1.0) return 1.0;  // exact: both sides are ||w||_2^2
  if (alpha == 1.5) return kHeadroom * kGnFit_alpha1_5;
  if (alpha == 2.0) return kHeadroom * kGnFit_alpha2;
  if (alpha == 3.0) return kHeadroom * kGnFit_alpha3;
  return 0.0;
}

inline constexpr double bilinear_constant(double s) {
  if (s == 0.0) return kHeadroom * kBilinearFit_s0;
  if (s == 1.0) return kHeadroom * kBilinearFit_s1;
  return 0.0;
}

}  // namespace hynls::frozen
