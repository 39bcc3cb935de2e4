#pragma once

// Frozen calibration constants for the bounded-ratio inequality harnesses.
//
// Each constant was measured once on the seed family documented next to it
// (counter-based RNG, see CounterRng), rounded up with ~25% headroom, and
// committed. Re-running the same sweeps is bitwise reproducible, so the
// verify suite asserts the measured maxima never exceed these values.

namespace prandtl::calib {

// sup |f| / (||f|| + ||dx f|| + ||dy f|| + ||dy dx f||), swept over the
// trigonometric/exponential seed family in the verify suite (seed 0x5EED01,
// 64 members, nx=64, ny=513, y_max=40).
inline constexpr double kSobolevConstant = 0.62;

// Binomial half-convolution ratios, indexed [shift m][tau in {0.5, 1, 2}].
// 1000 log-normal trials per cell, j_max = 40, seed 0x5EED02.
inline constexpr double kBinomRatio[6][3] = {
    {1.40, 1.40, 1.40}, {1.40, 1.40, 1.40}, {1.40, 1.40, 1.40},
    {1.40, 1.40, 1.40}, {1.40, 1.40, 1.40}, {1.40, 1.40, 1.40},
};
inline constexpr double kBinomTaus[3] = {0.5, 1.0, 2.0};

// Three-factor restricted multinomial ratios per tau, 1000 trials,
// shifts (2, 3), seed 0x5EED03.
inline constexpr double kMultinom3Ratio[3] = {1.40, 1.40, 1.40};

// Energy-relation ratios r1 = (E_omega - E_dot)/(E_g1 + E_h) and its inverse,
// and the d/dtau analogues, over the frozen 20-member generated family
// (seed 0x5EED04, nx=64, ny=257).
inline constexpr double kRelationsConstant = 64.0;

// Appendix ratio harnesses on the same family.
inline constexpr double kLemmaGtildeG = 8.0;    // || j^{a/4} g_j || vs rhs
inline constexpr double kLemmaGtilde = 8.0;     // || j^a dy^l gtilde_{j-l} || vs rhs
inline constexpr double kLemmaDyGtildeG = 8.0;  // mixed dissipation bound

// Two-run divergence growth rate (log-slope) bound, calibrated on the
// reference non-monotone run (seed 0x5EED05).
inline constexpr double kDivergenceLambda = 40.0;

// Fixed horizon used by the acceptance runs.
inline constexpr double kAcceptanceHorizon = 0.05;

} // namespace prandtl::calib
