#pragma once

// Seeded random objects for verification and test corpora.

#include <cstdint>
#include <random>
#include <vector>

#include "lqhv/states.hpp"
#include "lqhv/tensor_core.hpp"

namespace lqhv {

using Rng = std::mt19937_64;

cplx random_gaussian_cplx(Rng& rng);
std::vector<cplx> random_unit_vector(std::size_t d, Rng& rng);

// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
// GUE sample rescaled to operator norm 1.
ComplexMatrix random_hermitian_unit(std::size_t d, Rng& rng);

QuantumState random_pure_state(const std::vector<std::size_t>& dims, Rng& rng);
// G G^dagger / tr with G a d x rank Ginibre matrix.
QuantumState random_mixed_state(const std::vector<std::size_t>& dims, std::size_t rank, Rng& rng);
// Random convex mixture of `terms` product states.
std::vector<ProductComponent> random_separable_components(const std::vector<std::size_t>& dims,
                                                          std::size_t terms, Rng& rng);

// Rank-1 projective measurement in a Haar-random basis; d outcomes.
std::vector<ComplexMatrix> random_projective_measurement(std::size_t d, Rng& rng);

// Generic K-outcome POVM: E_k = S^{-1/2} G_k^dag G_k S^{-1/2} with Ginibre G_k.
std::vector<ComplexMatrix> random_povm(std::size_t d, std::size_t k, Rng& rng);

}  // namespace lqhv
