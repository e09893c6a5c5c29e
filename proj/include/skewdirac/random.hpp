#pragma once

// Seeded generators for randomized suites.

#include <cstdint>
#include <random>

#include "skewdirac/discrete_system.hpp"

namespace skewdirac {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
Matrix random_gaussian(Rng& rng, Index rows, Index cols);

/// Unitary factor of the QR decomposition of a Gaussian matrix, with the
/// phases of R's diagonal absorbed so the distribution is Haar.
Matrix random_unitary(Rng& rng, Index m);

/// beta(k) = [0 I_p] U(k)* for Haar unitaries U(k), resampled until both
/// nondegeneracy determinants are at least `margin`.
BetaSequence random_beta_sequence(Rng& rng, Index n, Index p, double margin = 1e-3);

/// Continues b with `extra` fresh rows (same acceptance rule).
BetaSequence extend_beta_sequence(Rng& rng, const BetaSequence& b, Index extra, double margin = 1e-3);

}  // namespace skewdirac
