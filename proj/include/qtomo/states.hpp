// Ground-truth density matrices used by the simulation and study tools.

#pragma once

#include <cstdint>

#include "qtomo/hermitian.hpp"

namespace qtomo {

// Even cat state |a> + |-a> truncated to the first dim Fock levels and
// renormalized.  Throws std::invalid_argument if the truncation window
// captures less than 99.9% of the untruncated norm, or if a < 0 or dim < 1.
HermitianMatrix make_cat_state(double amplitude, int dim);

// Phase-averaged PINEM state: a uniform mixture of jitter_samples pure
// states whose coefficients are Bessel amplitudes with a random linear
// phase ramp, phi ~ N(0, jitter_sigma).  dim must be odd so the ladder is
// symmetric around zero.  jitter_sigma == 0 yields the pure state.  Throws
// std::invalid_argument on bad parameters and std::runtime_error when the
// truncated window loses more than 1e-6 of the probability mass.
HermitianMatrix make_pinem_state(double g_pump, int dim, double jitter_sigma,
                                 int jitter_samples, std::uint64_t seed);

} // namespace qtomo
