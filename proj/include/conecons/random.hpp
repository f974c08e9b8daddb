#pragma once

#include "conecons/classical_consensus.hpp"
#include "conecons/hermitian_cone.hpp"
#include "conecons/quantum_channel.hpp"

#include <cstdint>
#include <random>

namespace conecons {

using Rng = std::mt19937_64;

/// Engine seeded from (seed, stream); distinct streams are independent.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// i.i.d. entries in (0, 1], masked by `density` off the diagonal, then each
/// row divided by its sum.
Eigen::MatrixXd random_stochastic_matrix(Eigen::Index n, Rng& rng,
                                         const RandomStochasticOptions& options = {});

/// Standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
ComplexMatrix random_complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Complex Gaussian vector normalized to unit length; uniform on the sphere.
ComplexVector haar_unit_vector(Eigen::Index n, Rng& rng);

/// m operators sliced from the orthonormalized columns of an (m n) x n
/// complex Gaussian matrix.
KrausMap random_kraus_map(Eigen::Index n, std::size_t m, Rng& rng);

/// (G + G^*) / 2 with complex Gaussian G.
HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng);

/// G G^* / n + shift I, shift uniform in (0.05, 1].
HermitianMatrix random_positive_definite(Eigen::Index n, Rng& rng);

/// G G^* / tr(G G^*); full rank almost surely.
DensityMatrix random_density_matrix(Eigen::Index n, Rng& rng);

}  // namespace conecons
