#pragma once

#include <cstdint>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect {

/// Undirected weighted graph in adjacency-list (CSR) form, no self loops.
struct Graph {
    std::vector<Index> xadj{0};
    std::vector<Index> adjncy;
    std::vector<Index> adjwgt;  ///< parallel to adjncy
    std::vector<Index> vwgt;

    Index size() const { return static_cast<Index>(vwgt.size()); }
    Index total_vertex_weight() const;
    Index max_vertex_weight() const;

    /// Unit-weight graph of a symmetric pattern; the diagonal is ignored.
    static Graph from_pattern(const SparsityPattern& p);
    /// Unit-weight graph from an explicit edge list (each undirected edge listed once).
    static Graph from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges);
};

struct CoarseGraph {
    Graph graph;
    std::vector<Index> cmap;  ///< fine vertex -> coarse vertex
};

/// side[v] in {0, 1}
struct Bisection {
    std::vector<std::uint8_t> side;

    Index weight(const Graph& g, int s) const;
    Index edge_cut(const Graph& g) const;
};

/// label[v]: 0 = V1, 1 = V2, 2 = separator
struct VertexSeparator {
    static constexpr std::uint8_t kSeparator = 2;
    std::vector<std::uint8_t> label;

    Index count(std::uint8_t l) const;
};

struct PartitionOptions {
    double imbalance_tol = 0.10;
    Index coarsest_size = 100;
    double min_shrink = 0.10;  ///< stop coarsening when a level shrinks by less than this fraction
    int refine_passes = 10;
    int bisection_seeds = 4;
};

/// Largest allowed part weight for a bisection of total weight `total`:
/// max((1 + tol) * total / 2, (total + max_vertex_weight) / 2).
double max_part_weight(Index total, Index max_vertex_weight, double tol);
bool is_balanced(const Graph& g, const Bisection& b, double tol);

/// One level of heavy-edge matching contraction.
CoarseGraph coarsen(const Graph& g);

/// Greedy graph growing from pseudo-peripheral seeds, best of several, then refined.
Bisection bisect_coarsest(const Graph& g, const PartitionOptions& opt = {});

/// Fiduccia-Mattheyses refinement with gain buckets. Edge cut never increases.
Bisection refine(const Graph& g, Bisection b, const PartitionOptions& opt = {});

/// Multilevel bisection: coarsen, bisect coarsest graph, project back with refinement.
Bisection multilevel_bisection(const Graph& g, const PartitionOptions& opt = {});

/// Greedy vertex cover of the cut edges, then pruned to be minimal.
VertexSeparator vertex_separator_from_edge_separator(const Graph& g, const Bisection& b);

/// Node of the separator tree. Ranges refer to positions in the new ordering.
struct SeparatorNode {
    Index begin = 0;
    Index end = 0;
    Index sep_begin = 0;  ///< [sep_begin, end) is this node's separator; empty for leaves
    bool leaf = true;
    Index parent = kNone;
    std::vector<Index> children;
};

struct OrderingResult {
    Permutation perm;
    std::vector<SeparatorNode> tree;  ///< tree[0] is the root
};

struct NestedDissectionOptions {
    Index leaf_size = 64;
    PartitionOptions partition;
};

OrderingResult nested_dissection(const SparsityPattern& p, const NestedDissectionOptions& opt = {});

/// Minimum degree on the explicit elimination graph. Ties go to the lowest index.
Permutation minimum_degree(const SparsityPattern& p);

/// Single-leaf tree wrapping any permutation (natural or minimum degree).
OrderingResult single_leaf_ordering(Permutation perm);

}  // namespace sparsedirect
