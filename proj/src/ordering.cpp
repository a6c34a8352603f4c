#include "sparsedirect/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace sparsedirect {

// ---------------------------------------------------------------------------
// Graph

Index Graph::total_vertex_weight() const { return std::accumulate(vwgt.begin(), vwgt.end(), Index{0}); }

Index Graph::max_vertex_weight() const
{
    return vwgt.empty() ? 0 : *std::max_element(vwgt.begin(), vwgt.end());
}

Graph Graph::from_pattern(const SparsityPattern& p)
{
    Graph g;
    const Index n = p.n();
    g.xadj.assign(n + 1, 0);
    g.vwgt.assign(n, 1);
    for (Index j = 0; j < n; ++j) {
        for (Index i : p.column(j)) {
            if (i != j) {
                g.adjncy.push_back(i);
            }
        }
        g.xadj[j + 1] = static_cast<Index>(g.adjncy.size());
    }
    g.adjwgt.assign(g.adjncy.size(), 1);
    return g;
}

Graph Graph::from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges)
{
    std::vector<std::set<Index>> adj(n);
    for (auto [a, b] : edges) {
        if (a == b) {
            continue;
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    Graph g;
    g.xadj.assign(n + 1, 0);
    g.vwgt.assign(n, 1);
    for (Index v = 0; v < n; ++v) {
        g.adjncy.insert(g.adjncy.end(), adj[v].begin(), adj[v].end());
        g.xadj[v + 1] = static_cast<Index>(g.adjncy.size());
    }
    g.adjwgt.assign(g.adjncy.size(), 1);
    return g;
}

Index Bisection::weight(const Graph& g, int s) const
{
    Index w = 0;
    for (Index v = 0; v < g.size(); ++v) {
        if (side[v] == s) {
            w += g.vwgt[v];
        }
    }
    return w;
}

Index Bisection::edge_cut(const Graph& g) const
{
    Index cut = 0;
    for (Index v = 0; v < g.size(); ++v) {
        for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
            const Index u = g.adjncy[e];
            if (u > v && side[u] != side[v]) {
                cut += g.adjwgt[e];
            }
        }
    }
    return cut;
}

Index VertexSeparator::count(std::uint8_t l) const { return std::count(label.begin(), label.end(), l); }

double max_part_weight(Index total, Index max_vertex_weight, double tol)
{
    return std::max((1.0 + tol) * static_cast<double>(total) / 2.0,
                    static_cast<double>(total + max_vertex_weight) / 2.0);
}

bool is_balanced(const Graph& g, const Bisection& b, double tol)
{
    const double limit = max_part_weight(g.total_vertex_weight(), g.max_vertex_weight(), tol);
    return b.weight(g, 0) <= limit && b.weight(g, 1) <= limit;
}

// ---------------------------------------------------------------------------
// Coarsening

CoarseGraph coarsen(const Graph& g)
{
    const Index n = g.size();
    std::vector<Index> match(n, kNone);
    CoarseGraph cg;
    cg.cmap.assign(n, kNone);
    Index nc = 0;
    for (Index v = 0; v < n; ++v) {
        if (match[v] != kNone) {
            continue;
        }
        Index best = kNone;
        Index best_w = -1;
        for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
            const Index u = g.adjncy[e];
            if (u == v || match[u] != kNone) {
                continue;
            }
            if (g.adjwgt[e] > best_w || (g.adjwgt[e] == best_w && u < best)) {
                best = u;
                best_w = g.adjwgt[e];
            }
        }
        match[v] = best == kNone ? v : best;
        if (best != kNone) {
            match[best] = v;
            cg.cmap[best] = nc;
        }
        cg.cmap[v] = nc++;
    }

    // members of each coarse vertex, in fine order
    std::vector<Index> first(nc, kNone), second(nc, kNone);
    for (Index v = 0; v < n; ++v) {
        const Index c = cg.cmap[v];
        (first[c] == kNone ? first[c] : second[c]) = v;
    }

    Graph& h = cg.graph;
    h.xadj.assign(nc + 1, 0);
    h.vwgt.assign(nc, 0);
    std::vector<Index> slot(nc, kNone);
    std::vector<std::pair<Index, Index>> row;
    for (Index c = 0; c < nc; ++c) {
        row.clear();
        for (Index v : {first[c], second[c]}) {
            if (v == kNone) {
                continue;
            }
            h.vwgt[c] += g.vwgt[v];
            for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
                const Index d = cg.cmap[g.adjncy[e]];
                if (d == c) {
                    continue;
                }
                if (slot[d] == kNone) {
                    slot[d] = static_cast<Index>(row.size());
                    row.emplace_back(d, 0);
                }
                row[slot[d]].second += g.adjwgt[e];
            }
        }
        std::sort(row.begin(), row.end());
        for (auto [d, w] : row) {
            h.adjncy.push_back(d);
            h.adjwgt.push_back(w);
            slot[d] = kNone;
        }
        h.xadj[c + 1] = static_cast<Index>(h.adjncy.size());
    }
    return cg;
}

// ---------------------------------------------------------------------------
// Refinement

namespace {

/// Gain buckets for one side: highest gain first, lowest vertex index within a bucket.
class GainBuckets {
public:
    void insert(Index v, Index gain) { buckets_[gain].insert(v); }
    void erase(Index v, Index gain)
    {
        auto it = buckets_.find(gain);
        it->second.erase(v);
        if (it->second.empty()) {
            buckets_.erase(it);
        }
    }
    bool empty() const { return buckets_.empty(); }
    std::pair<Index, Index> top() const  // (vertex, gain)
    {
        const auto& [gain, vs] = *buckets_.begin();
        return {*vs.begin(), gain};
    }

private:
    std::map<Index, std::set<Index>, std::greater<>> buckets_;
};

struct PartState {
    bool balanced;
    Index cut;
    Index imbalance;

    bool better_than(const PartState& o) const
    {
        if (balanced != o.balanced) {
            return balanced;
        }
        if (cut != o.cut) {
            return cut < o.cut;
        }
        return imbalance < o.imbalance;
    }
};

}  // namespace

Bisection refine(const Graph& g, Bisection b, const PartitionOptions& opt)
{
    const Index n = g.size();
    if (n < 2) {
        return b;
    }
    const Index total = g.total_vertex_weight();
    const Index maxv = g.max_vertex_weight();
    const double limit = max_part_weight(total, maxv, opt.imbalance_tol);
    const double slack = limit + static_cast<double>(maxv);

    std::vector<Index> gain(n);
    std::vector<char> locked(n);
    std::vector<Index> moves;

    for (int pass = 0; pass < opt.refine_passes; ++pass) {
        Index w[2] = {b.weight(g, 0), b.weight(g, 1)};
        Index cut = b.edge_cut(g);
        auto state = [&] {
            return PartState{w[0] <= limit && w[1] <= limit, cut, std::abs(w[0] - w[1])};
        };

        GainBuckets buckets[2];
        for (Index v = 0; v < n; ++v) {
            gain[v] = 0;
            for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
                gain[v] += b.side[g.adjncy[e]] != b.side[v] ? g.adjwgt[e] : -g.adjwgt[e];
            }
            buckets[b.side[v]].insert(v, gain[v]);
            locked[v] = 0;
        }

        PartState best = state();
        std::size_t best_len = 0;
        moves.clear();
        const std::size_t stall_limit = static_cast<std::size_t>(std::max<Index>(50, n / 8));

        for (;;) {
            // candidate from each side: top of its bucket if the destination stays within slack
            Index cand[2] = {kNone, kNone};
            Index cgain[2] = {0, 0};
            for (int s = 0; s < 2; ++s) {
                if (buckets[s].empty()) {
                    continue;
                }
                auto [v, gv] = buckets[s].top();
                if (static_cast<double>(w[1 - s] + g.vwgt[v]) <= slack) {
                    cand[s] = v;
                    cgain[s] = gv;
                }
            }
            int from = -1;
            const bool over0 = w[0] > limit, over1 = w[1] > limit;
            if (over0 && cand[0] != kNone) {
                from = 0;
            } else if (over1 && cand[1] != kNone) {
                from = 1;
            } else if (cand[0] != kNone && cand[1] != kNone) {
                if (cgain[0] != cgain[1]) {
                    from = cgain[0] > cgain[1] ? 0 : 1;
                } else if (w[0] != w[1]) {
                    from = w[0] > w[1] ? 0 : 1;
                } else {
                    from = cand[0] < cand[1] ? 0 : 1;
                }
            } else if (cand[0] != kNone) {
                from = 0;
            } else if (cand[1] != kNone) {
                from = 1;
            }
            if (from < 0) {
                break;
            }

            const Index v = cand[from];
            buckets[from].erase(v, gain[v]);
            locked[v] = 1;
            b.side[v] = static_cast<std::uint8_t>(1 - from);
            w[from] -= g.vwgt[v];
            w[1 - from] += g.vwgt[v];
            cut -= gain[v];
            gain[v] = -gain[v];
            for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
                const Index u = g.adjncy[e];
                if (locked[u]) {
                    continue;
                }
                // edge (u, v) flipped between internal and external for u
                const Index delta = b.side[u] == b.side[v] ? -2 * g.adjwgt[e] : 2 * g.adjwgt[e];
                buckets[b.side[u]].erase(u, gain[u]);
                gain[u] += delta;
                buckets[b.side[u]].insert(u, gain[u]);
            }
            moves.push_back(v);

            const PartState now = state();
            if (now.better_than(best)) {
                best = now;
                best_len = moves.size();
            } else if (moves.size() - best_len > stall_limit) {
                break;
            }
        }

        for (std::size_t k = moves.size(); k > best_len; --k) {
            const Index v = moves[k - 1];
            b.side[v] = static_cast<std::uint8_t>(1 - b.side[v]);
        }
        if (best_len == 0) {
            break;
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// Initial bisection

namespace {

/// BFS levels from `start`; returns (farthest vertex with lowest index among the last level, eccentricity).
std::pair<Index, Index> bfs_farthest(const Graph& g, Index start, std::vector<Index>& level)
{
    std::fill(level.begin(), level.end(), kNone);
    std::queue<Index> q;
    q.push(start);
    level[start] = 0;
    Index far = start;
    while (!q.empty()) {
        const Index v = q.front();
        q.pop();
        if (level[v] > level[far] || (level[v] == level[far] && v < far)) {
            far = v;
        }
        for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
            const Index u = g.adjncy[e];
            if (level[u] == kNone) {
                level[u] = level[v] + 1;
                q.push(u);
            }
        }
    }
    return {far, level[far]};
}

Index pseudo_peripheral(const Graph& g, Index start)
{
    std::vector<Index> level(g.size());
    auto [far, ecc] = bfs_farthest(g, start, level);
    Index current = start;
    Index current_ecc = -1;
    while (ecc > current_ecc) {
        current = far;
        current_ecc = ecc;
        std::tie(far, ecc) = bfs_farthest(g, current, level);
    }
    return current;
}

Bisection grow_from(const Graph& g, Index seed)
{
    const Index n = g.size();
    const double half = static_cast<double>(g.total_vertex_weight()) / 2.0;
    Bisection b;
    b.side.assign(n, 1);

    // frontier keyed by (-gain, v); gain = edge weight into region minus edge weight out of it
    std::vector<Index> gain(n, 0);
    std::vector<char> in_frontier(n, 0);
    std::set<std::pair<Index, Index>> frontier;
    auto degree = [&](Index v) {
        Index d = 0;
        for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
            d += g.adjwgt[e];
        }
        return d;
    };

    Index region = 0;
    Index next_unvisited = 0;
    Index pick = seed;
    for (;;) {
        if (pick == kNone) {
            if (!frontier.empty()) {
                pick = frontier.begin()->second;
            } else {
                // disconnected remainder: continue with the lowest unassigned vertex
                while (next_unvisited < n && b.side[next_unvisited] == 0) {
                    ++next_unvisited;
                }
                if (next_unvisited == n) {
                    break;
                }
                pick = next_unvisited;
            }
        }
        const double before = std::abs(static_cast<double>(region) - half);
        const double after = std::abs(static_cast<double>(region + g.vwgt[pick]) - half);
        if (region > 0 && after >= before) {
            break;
        }
        if (in_frontier[pick]) {
            frontier.erase({-gain[pick], pick});
            in_frontier[pick] = 0;
        }
        b.side[pick] = 0;
        region += g.vwgt[pick];
        for (Index e = g.xadj[pick]; e < g.xadj[pick + 1]; ++e) {
            const Index u = g.adjncy[e];
            if (b.side[u] == 0) {
                continue;
            }
            if (in_frontier[u]) {
                frontier.erase({-gain[u], u});
            } else {
                gain[u] = -degree(u);
            }
            gain[u] += 2 * g.adjwgt[e];
            frontier.insert({-gain[u], u});
            in_frontier[u] = 1;
        }
        pick = kNone;
    }
    return b;
}

}  // namespace

Bisection bisect_coarsest(const Graph& g, const PartitionOptions& opt)
{
    const Index n = g.size();
    Bisection best;
    best.side.assign(n, 0);
    if (n < 2) {
        return best;
    }
    std::vector<Index> seeds;
    const int tries = std::max(1, opt.bisection_seeds);
    for (int k = 0; k < tries; ++k) {
        const Index start = static_cast<Index>((static_cast<long double>(n - 1) * k) / std::max(1, tries - 1));
        const Index s = pseudo_peripheral(g, start);
        if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) {
            seeds.push_back(s);
        }
    }
    PartState best_state{false, 0, 0};
    bool have = false;
    const double limit = max_part_weight(g.total_vertex_weight(), g.max_vertex_weight(), opt.imbalance_tol);
    for (Index s : seeds) {
        Bisection b = refine(g, grow_from(g, s), opt);
        const Index w0 = b.weight(g, 0), w1 = b.weight(g, 1);
        const PartState st{w0 <= limit && w1 <= limit, b.edge_cut(g), std::abs(w0 - w1)};
        if (!have || st.better_than(best_state)) {
            best = std::move(b);
            best_state = st;
            have = true;
        }
    }
    return best;
}

Bisection multilevel_bisection(const Graph& g, const PartitionOptions& opt)
{
    std::vector<CoarseGraph> levels;
    const Graph* cur = &g;
    while (cur->size() > opt.coarsest_size) {
        CoarseGraph cg = coarsen(*cur);
        if (static_cast<double>(cg.graph.size()) > (1.0 - opt.min_shrink) * static_cast<double>(cur->size())) {
            break;
        }
        levels.push_back(std::move(cg));
        cur = &levels.back().graph;
    }
    Bisection b = bisect_coarsest(*cur, opt);
    for (std::size_t k = levels.size(); k-- > 0;) {
        const Graph& fine = k == 0 ? g : levels[k - 1].graph;
        Bisection projected;
        projected.side.resize(fine.size());
        for (Index v = 0; v < fine.size(); ++v) {
            projected.side[v] = b.side[levels[k].cmap[v]];
        }
        b = refine(fine, std::move(projected), opt);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Vertex separator

VertexSeparator vertex_separator_from_edge_separator(const Graph& g, const Bisection& b)
{
    const Index n = g.size();
    VertexSeparator sep;
    sep.label.assign(b.side.begin(), b.side.end());
    Index side_w[2] = {b.weight(g, 0), b.weight(g, 1)};

    std::vector<Index> cutdeg(n, 0);
    std::vector<Index> boundary;
    for (Index v = 0; v < n; ++v) {
        for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
            if (b.side[g.adjncy[e]] != b.side[v]) {
                cutdeg[v] += g.adjwgt[e];
            }
        }
        if (cutdeg[v] > 0) {
            boundary.push_back(v);
        }
    }

    for (;;) {
        Index pick = kNone;
        for (Index v : boundary) {
            if (sep.label[v] == VertexSeparator::kSeparator || cutdeg[v] == 0) {
                continue;
            }
            if (pick == kNone || cutdeg[v] > cutdeg[pick]) {
                pick = v;
                continue;
            }
            if (cutdeg[v] == cutdeg[pick]) {
                const Index wv = side_w[sep.label[v]], wp = side_w[sep.label[pick]];
                if (wv < wp) {
                    pick = v;  // prefer taking from the lighter side; lower index already wins ties
                }
            }
        }
        if (pick == kNone) {
            break;
        }
        side_w[sep.label[pick]] -= g.vwgt[pick];
        for (Index e = g.xadj[pick]; e < g.xadj[pick + 1]; ++e) {
            const Index u = g.adjncy[e];
            if (sep.label[u] != VertexSeparator::kSeparator && sep.label[u] != sep.label[pick]) {
                cutdeg[u] -= g.adjwgt[e];
            }
        }
        cutdeg[pick] = 0;
        sep.label[pick] = VertexSeparator::kSeparator;
    }

    // prune: a separator vertex touching only one side can rejoin it
    for (bool changed = true; changed;) {
        changed = false;
        for (Index v = 0; v < n; ++v) {
            if (sep.label[v] != VertexSeparator::kSeparator) {
                continue;
            }
            bool touches[2] = {false, false};
            for (Index e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
                const auto l = sep.label[g.adjncy[e]];
                if (l < 2) {
                    touches[l] = true;
                }
            }
            if (!touches[0] || !touches[1]) {
                const std::uint8_t to = !touches[0] && !touches[1] ? b.side[v] : (touches[0] ? 0 : 1);
                sep.label[v] = to;
                changed = true;
            }
        }
    }
    return sep;
}

// ---------------------------------------------------------------------------
// Minimum degree

namespace {

std::vector<Index> minimum_degree_order(std::vector<std::vector<Index>> adj)
{
    const Index n = static_cast<Index>(adj.size());
    std::set<std::pair<Index, Index>> queue;
    for (Index v = 0; v < n; ++v) {
        queue.insert({static_cast<Index>(adj[v].size()), v});
    }
    std::vector<Index> order;
    order.reserve(n);
    std::vector<Index> merged;
    while (!queue.empty()) {
        const Index v = queue.begin()->second;
        queue.erase(queue.begin());
        order.push_back(v);
        const std::vector<Index> nbrs = std::move(adj[v]);
        adj[v].clear();
        for (Index u : nbrs) {
            queue.erase({static_cast<Index>(adj[u].size()), u});
            merged.clear();
            std::set_union(adj[u].begin(), adj[u].end(), nbrs.begin(), nbrs.end(), std::back_inserter(merged));
            std::erase_if(merged, [&](Index x) { return x == u || x == v; });
            adj[u].swap(merged);
            queue.insert({static_cast<Index>(adj[u].size()), u});
        }
    }
    return order;
}

std::vector<std::vector<Index>> adjacency_lists(const SparsityPattern& p)
{
    std::vector<std::vector<Index>> adj(p.n());
    for (Index j = 0; j < p.n(); ++j) {
        for (Index i : p.column(j)) {
            if (i != j) {
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

}  // namespace

Permutation minimum_degree(const SparsityPattern& p)
{
    return Permutation(minimum_degree_order(adjacency_lists(p)));
}

OrderingResult single_leaf_ordering(Permutation perm)
{
    OrderingResult r;
    const Index n = perm.size();
    r.perm = std::move(perm);
    r.tree.push_back(SeparatorNode{0, n, n, true, kNone, {}});
    return r;
}

// ---------------------------------------------------------------------------
// Nested dissection

namespace {

class Dissector {
public:
    Dissector(const Graph& g, const NestedDissectionOptions& opt)
        : g_(g), opt_(opt), local_(g.size(), kNone), perm_(g.size(), kNone)
    {
    }

    OrderingResult run()
    {
        std::vector<Index> all(g_.size());
        std::iota(all.begin(), all.end(), Index{0});
        dissect(all, 0, kNone);
        return {Permutation(std::move(perm_)), std::move(tree_)};
    }

private:
    Graph induced(const std::vector<Index>& verts)
    {
        for (std::size_t k = 0; k < verts.size(); ++k) {
            local_[verts[k]] = static_cast<Index>(k);
        }
        Graph sub;
        sub.xadj.assign(verts.size() + 1, 0);
        sub.vwgt.assign(verts.size(), 1);
        for (std::size_t k = 0; k < verts.size(); ++k) {
            const Index v = verts[k];
            for (Index e = g_.xadj[v]; e < g_.xadj[v + 1]; ++e) {
                const Index u = local_[g_.adjncy[e]];
                if (u != kNone) {
                    sub.adjncy.push_back(u);
                    sub.adjwgt.push_back(g_.adjwgt[e]);
                }
            }
            sub.xadj[k + 1] = static_cast<Index>(sub.adjncy.size());
        }
        for (Index v : verts) {
            local_[v] = kNone;
        }
        return sub;
    }

    void make_leaf(const std::vector<Index>& verts, const Graph& sub, Index node)
    {
        std::vector<std::vector<Index>> adj(sub.size());
        for (Index v = 0; v < sub.size(); ++v) {
            adj[v].assign(sub.adjncy.begin() + sub.xadj[v], sub.adjncy.begin() + sub.xadj[v + 1]);
            std::sort(adj[v].begin(), adj[v].end());
        }
        const auto order = minimum_degree_order(std::move(adj));
        const Index begin = tree_[node].begin;
        for (std::size_t k = 0; k < order.size(); ++k) {
            perm_[begin + static_cast<Index>(k)] = verts[order[k]];
        }
        tree_[node].leaf = true;
        tree_[node].sep_begin = tree_[node].end;
    }

    Index dissect(const std::vector<Index>& verts, Index begin, Index parent)
    {
        const Index node = static_cast<Index>(tree_.size());
        const Index size = static_cast<Index>(verts.size());
        tree_.push_back(SeparatorNode{begin, begin + size, begin + size, true, parent, {}});
        if (parent != kNone) {
            tree_[parent].children.push_back(node);
        }

        const Graph sub = induced(verts);
        if (size <= opt_.leaf_size) {
            make_leaf(verts, sub, node);
            return node;
        }

        const Bisection b = multilevel_bisection(sub, opt_.partition);
        const VertexSeparator sep = vertex_separator_from_edge_separator(sub, b);
        std::vector<Index> parts[3];
        for (Index k = 0; k < size; ++k) {
            parts[sep.label[k]].push_back(verts[k]);
        }
        const Index n1 = static_cast<Index>(parts[0].size());
        const Index n2 = static_cast<Index>(parts[1].size());
        if (std::max(n1, n2) == size || n1 + n2 == 0) {
            make_leaf(verts, sub, node);
            return node;
        }

        tree_[node].leaf = false;
        tree_[node].sep_begin = begin + n1 + n2;
        for (std::size_t k = 0; k < parts[2].size(); ++k) {
            perm_[begin + n1 + n2 + static_cast<Index>(k)] = parts[2][k];
        }
        if (n1 > 0) {
            dissect(parts[0], begin, node);
        }
        if (n2 > 0) {
            dissect(parts[1], begin + n1, node);
        }
        return node;
    }

    const Graph& g_;
    const NestedDissectionOptions& opt_;
    std::vector<Index> local_;
    std::vector<Index> perm_;
    std::vector<SeparatorNode> tree_;
};

}  // namespace

OrderingResult nested_dissection(const SparsityPattern& p, const NestedDissectionOptions& opt)
{
    if (opt.leaf_size < 1) {
        throw std::invalid_argument("nested_dissection: leaf_size must be positive");
    }
    const Graph g = Graph::from_pattern(p);
    return Dissector(g, opt).run();
}

}  // namespace sparsedirect
