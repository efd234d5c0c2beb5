#pragma once

// Seeded random spinor fields for property suites and probe sets.

#include <cstdint>
#include <random>

#include "tdirac/spectral.hpp"

namespace tdirac {

using Rng = std::mt19937_64;

/// i.i.d. complex Gaussian coefficients on every lattice point.
SpinorField random_field(const FrequencyLattice& lattice, int d0, Rng& rng);

/// Gaussian coefficients damped by exp(-|xi|^2 / (2 width^2)).
SpinorField random_smooth_field(const FrequencyLattice& lattice, int d0, Rng& rng,
                                double width);

/// Gaussian coefficients damped by <xi>^{-decay}.
SpinorField random_power_law_field(const FrequencyLattice& lattice, int d0, Rng& rng,
                                   double decay);

}  // namespace tdirac
