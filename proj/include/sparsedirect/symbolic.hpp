#pragma once

#include <vector>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect {

/// parent[i] > i for every non-root; kNone marks roots.
struct EliminationForest {
    std::vector<Index> parent;

    Index size() const { return static_cast<Index>(parent.size()); }
    /// Columns on the path from each seed to its root, sorted ascending.
    std::vector<Index> ancestor_closure(const std::vector<Index>& seeds) const;
};

struct SupernodePartition {
    std::vector<Index> sizes;
    std::vector<Index> xsuper;  ///< xsuper[m] = first column of supernode m; xsuper.back() = n

    Index count() const { return static_cast<Index>(sizes.size()); }
};

struct SymbolicFactor {
    EliminationForest tree;
    SparsityPattern fill;  ///< strict lower triangle of L (identical to U^T)
    SupernodePartition supernodes;

    /// Nonzeros of L + U including the diagonal.
    Index nnz_lu() const { return 2 * fill.nnz() + fill.n(); }
};

struct EtreeStats {
    Index compression_steps = 0;  ///< inner-loop iterations of the ancestor walk
};

/// Parent array of the elimination tree with ancestor path compression.
/// `p` must be symmetric; only its strictly upper part is read.
EliminationForest elimination_tree(const SparsityPattern& p, EtreeStats* stats = nullptr);

/// Strictly lower fill pattern: each column inherits its children's entries above itself.
SparsityPattern fill_pattern(const SparsityPattern& p, const EliminationForest& tree);

/// Fill pattern and maximal fundamental supernodes computed in one sweep.
SymbolicFactor supernode_partition(const SparsityPattern& p);

/// Level schedule: level k holds the columns whose subtree height is k.
/// Columns of one level are never ancestors of each other.
std::vector<std::vector<Index>> subtree_schedule(const EliminationForest& tree);

}  // namespace sparsedirect
