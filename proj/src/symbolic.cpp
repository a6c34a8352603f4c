#include "sparsedirect/symbolic.hpp"

#include <algorithm>
#include <iterator>

namespace sparsedirect {

std::vector<Index> EliminationForest::ancestor_closure(const std::vector<Index>& seeds) const
{
    std::vector<char> mark(parent.size(), 0);
    for (Index s : seeds) {
        for (Index j = s; j != kNone && !mark[j]; j = parent[j]) {
            mark[j] = 1;
        }
    }
    std::vector<Index> out;
    for (Index j = 0; j < size(); ++j) {
        if (mark[j]) {
            out.push_back(j);
        }
    }
    return out;
}

EliminationForest elimination_tree(const SparsityPattern& p, EtreeStats* stats)
{
    const Index n = p.n();
    EliminationForest t;
    t.parent.assign(n, kNone);
    std::vector<Index> ancestor(n, kNone);
    Index steps = 0;
    for (Index k = 0; k < n; ++k) {
        for (Index i : p.column(k)) {
            if (i >= k) {
                break;
            }
            while (i != kNone && i < k) {
                const Index j = ancestor[i];
                ancestor[i] = k;
                if (j == kNone) {
                    t.parent[i] = k;
                }
                i = j;
                ++steps;
            }
        }
    }
    if (stats != nullptr) {
        stats->compression_steps = steps;
    }
    return t;
}

namespace {

/// Appends the entries of `src` greater than `above` to the sorted column `dst`.
void supplement(std::vector<Index>& dst, std::span<const Index> src, Index above, std::vector<Index>& scratch)
{
    auto first = std::upper_bound(src.begin(), src.end(), above);
    if (first == src.end()) {
        return;
    }
    scratch.clear();
    std::set_union(dst.begin(), dst.end(), first, src.end(), std::back_inserter(scratch));
    dst.swap(scratch);
}

SparsityPattern compress(Index n, std::vector<std::vector<Index>>& cols)
{
    std::vector<Index> ptr(n + 1, 0);
    for (Index j = 0; j < n; ++j) {
        ptr[j + 1] = ptr[j] + static_cast<Index>(cols[j].size());
    }
    std::vector<Index> rows;
    rows.reserve(ptr[n]);
    for (auto& c : cols) {
        rows.insert(rows.end(), c.begin(), c.end());
        std::vector<Index>().swap(c);
    }
    return {n, std::move(ptr), std::move(rows)};
}

}  // namespace

SparsityPattern fill_pattern(const SparsityPattern& p, const EliminationForest& tree)
{
    const Index n = p.n();
    std::vector<std::vector<Index>> cols(n);
    std::vector<Index> scratch;
    for (Index j = 0; j < n; ++j) {
        supplement(cols[j], p.column(j), j, scratch);
        const Index k = tree.parent[j];
        if (k != kNone) {
            supplement(cols[k], cols[j], k, scratch);
        }
    }
    return compress(n, cols);
}

SymbolicFactor supernode_partition(const SparsityPattern& p)
{
    const Index n = p.n();
    SymbolicFactor s;
    s.tree = elimination_tree(p);
    const auto& parent = s.tree.parent;

    std::vector<std::vector<Index>> cols(n);
    std::vector<Index> scratch;
    Index lead_count = 0;  // entries in the first column of the current supernode
    for (Index j = 0; j < n; ++j) {
        supplement(cols[j], p.column(j), j, scratch);
        const Index r = static_cast<Index>(cols[j].size());
        if (j > 0 && parent[j - 1] == j && s.supernodes.sizes.back() + r == lead_count) {
            ++s.supernodes.sizes.back();
        } else {
            s.supernodes.sizes.push_back(1);
            lead_count = r;
        }
        const Index k = parent[j];
        if (k != kNone) {
            supplement(cols[k], cols[j], k, scratch);
        }
    }
    s.supernodes.xsuper.assign(1, 0);
    for (Index sz : s.supernodes.sizes) {
        s.supernodes.xsuper.push_back(s.supernodes.xsuper.back() + sz);
    }
    s.fill = compress(n, cols);
    return s;
}

std::vector<std::vector<Index>> subtree_schedule(const EliminationForest& tree)
{
    const Index n = tree.size();
    std::vector<Index> height(n, 0);
    Index max_height = n > 0 ? 0 : -1;
    for (Index j = 0; j < n; ++j) {
        const Index k = tree.parent[j];
        if (k != kNone) {
            height[k] = std::max(height[k], height[j] + 1);
        }
        max_height = std::max(max_height, height[j]);
    }
    std::vector<std::vector<Index>> levels(max_height + 1);
    for (Index j = 0; j < n; ++j) {
        levels[height[j]].push_back(j);
    }
    return levels;
}

}  // namespace sparsedirect
