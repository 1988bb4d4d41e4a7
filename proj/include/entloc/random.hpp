#pragma once

// Seeded sampling of random states, unitaries, isometries, POVMs and
// instruments. Every sampler takes the generator explicitly; nothing here
// touches global state.

#include <cstdint>
#include <random>
#include <vector>

#include "entloc/qcore.hpp"

namespace entloc {

using Rng = std::mt19937_64;

/// Independent sub-seed for stream `index` of a master seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Matrix of iid standard complex Gaussians (real and imaginary parts N(0, 1/2)).
Matrix complex_gaussian(int rows, int cols, Rng& rng);

/// Haar-random unitary: QR of a complex Gaussian with the R-diagonal phases fixed.
Matrix random_unitary(int dim, Rng& rng);
/// Haar-random isometry (rows >= cols), W^dagger W = I.
Matrix random_isometry(int rows, int cols, Rng& rng);

/// Haar-random pure state from a normalized complex Gaussian vector.
PureState random_pure(const DimSpec& dims, Rng& rng);
/// Partial trace of a Haar-random purification with a `rank`-dimensional ancilla.
DensityOperator random_density(const DimSpec& dims, int rank, Rng& rng);

/// POVM with `outcomes` elements of rank <= `rank` each, built from the row
/// blocks of a random isometry so that sum_k Q_k = I by construction.
std::vector<Matrix> random_povm(int dim, int outcomes, Rng& rng, int rank = 1);

/// Kraus operators of a random trace-preserving instrument on a `dim`-level
/// party: kraus_counts[j] square operators for outcome j.
std::vector<std::vector<Matrix>> random_instrument_kraus(int dim, const std::vector<int>& kraus_counts,
                                                        Rng& rng);

/// Closest isometry to `x` (polar factor U V^dagger of its SVD).
Matrix polar_isometry(const Matrix& x);

}  // namespace entloc
