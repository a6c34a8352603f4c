#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect {

/// Raised when no perfect matching exists; carries the best achievable cardinality.
class StructurallySingular : public std::runtime_error {
public:
    StructurallySingular(Index n, Index cardinality)
        : std::runtime_error("matrix is structurally singular: maximum matching has cardinality " +
                             std::to_string(cardinality) + " of " + std::to_string(n)),
          n_(n), cardinality_(cardinality)
    {
    }
    Index n() const { return n_; }
    Index cardinality() const { return cardinality_; }

private:
    Index n_;
    Index cardinality_;
};

struct CardinalityMatching {
    std::vector<Index> row_for_col;  ///< kNone for unmatched columns
    Index cardinality = 0;

    bool perfect() const { return cardinality == static_cast<Index>(row_for_col.size()); }
};

/// Maximum-cardinality bipartite matching by repeated augmenting-path search.
CardinalityMatching maximum_cardinality_matching(const SparsityPattern& p);

struct MatchingResult {
    std::vector<Index> row_for_col;  ///< row_for_col[j] = i means (r_i, c_j) is matched
    std::vector<double> u;           ///< row duals, log scale
    std::vector<double> v;           ///< column duals, log scale
    ScalingPair scaling;
    Index tiny_entries_ignored = 0;  ///< stored entries with |a_ij| < 1e-300 treated as zeros

    /// Row permutation placing the matched entry of column j at position (j, j).
    Permutation row_permutation() const { return Permutation(row_for_col); }
};

/// Perfect matching maximizing prod |a_{row_for_col[j], j}|, with duals and scalings
/// such that Pi^T D_r A D_c has unit-magnitude diagonal and entries bounded by 1.
///
/// Solved as a linear-sum assignment on c_ij = log(colmax_j) - log|a_ij| by
/// shortest augmenting paths (Dijkstra on reduced costs, one augmentation per column).
/// Throws StructurallySingular if no perfect matching exists.
MatchingResult maximum_weight_matching(const CscMatrix& a);

/// d_r[i] = exp(u_i), d_c[j] = exp(v_j) / column_maxima[j].
ScalingPair scalings_from_duals(const std::vector<double>& u, const std::vector<double>& v,
                                const std::vector<double>& column_maxima);

}  // namespace sparsedirect
