#pragma once

// Seeded samplers for states and PSD matrices. All samplers draw from an
// explicit engine; nothing here keeps hidden state.

#include <cstdint>
#include <random>

#include "ebcert/linalg.hpp"

namespace ebcert {

using Rng = std::mt19937_64;

/// Matrix of i.i.d. standard complex Gaussians (E|z|^2 = 1).
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed unit vector.
ComplexVector random_unit_vector(std::size_t dim, Rng& rng);

/// G G^dagger with G a dim x rank Ginibre matrix.
ComplexMatrix random_psd(std::size_t dim, std::size_t rank, Rng& rng);

/// Normalized G G^dagger. rank = dim gives a full-rank state almost surely.
DensityMatrix random_density_matrix(std::size_t dim, std::size_t rank, Rng& rng);
inline DensityMatrix random_density_matrix(std::size_t dim, Rng& rng) {
  return random_density_matrix(dim, dim, rng);
}

DensityMatrix random_pure_state(std::size_t dim, Rng& rng);

/// Uniform index in [0, n).
std::size_t uniform_index(std::size_t n, Rng& rng);

}  // namespace ebcert
