#pragma once

#include <cstdint>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect::gallery {

/// 5-point Laplacian on a k x k grid, natural row-major numbering.
CscMatrix grid_laplacian(Index k);

/// Random unsymmetric pattern with roughly `per_col` off-diagonals per column;
/// the diagonal exceeds both its row and column absolute sums.
CscMatrix random_diagonally_dominant(Index n, Index per_col, std::uint64_t seed);

/// Random matrix that has a perfect matching hidden behind a random row
/// permutation, with entry magnitudes spread over many decades.
CscMatrix random_nonsingular(Index n, Index per_col, std::uint64_t seed);

/// 479 x 479 unsymmetric matrix mimicking a chemical-process Jacobian: few entries per
/// column, many zero diagonals, badly scaled rows.
CscMatrix west_like(std::uint64_t seed = 479);

/// The 6 x 6 matching example (14 entries).
CscMatrix perfect_matching_example();

/// The 6 x 6 partition example (14 entries).
CscMatrix two_way_partition_example();

}  // namespace sparsedirect::gallery
