#include "sparsedirect/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

namespace sparsedirect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyMagnitude = 1e-300;

}  // namespace

CardinalityMatching maximum_cardinality_matching(const SparsityPattern& pat)
{
    const Index n = pat.n();
    auto cp = pat.col_ptr();
    auto ri = pat.row_idx();

    CardinalityMatching m;
    m.row_for_col.assign(n, kNone);
    std::vector<Index> col_for_row(n, kNone);

    // cheap pass: first free row in each column
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            if (col_for_row[ri[p]] == kNone) {
                col_for_row[ri[p]] = j;
                m.row_for_col[j] = ri[p];
                ++m.cardinality;
                break;
            }
        }
    }

    // depth-first augmenting path search from every free column
    std::vector<Index> visited(n, kNone);  // stamped with the root column
    std::vector<Index> col_stack, pos_stack, row_stack;
    for (Index root = 0; root < n; ++root) {
        if (m.row_for_col[root] != kNone) {
            continue;
        }
        col_stack.assign(1, root);
        pos_stack.assign(1, cp[root]);
        row_stack.clear();
        Index free_row = kNone;
        while (!col_stack.empty() && free_row == kNone) {
            const Index j = col_stack.back();
            Index& pos = pos_stack.back();
            // lookahead for a free row in this column
            bool advanced = false;
            while (pos < cp[j + 1]) {
                const Index i = ri[pos++];
                if (visited[i] == root) {
                    continue;
                }
                visited[i] = root;
                if (col_for_row[i] == kNone) {
                    free_row = i;
                    row_stack.push_back(i);
                    advanced = true;
                    break;
                }
                row_stack.push_back(i);
                col_stack.push_back(col_for_row[i]);
                pos_stack.push_back(cp[col_for_row[i]]);
                advanced = true;
                break;
            }
            if (!advanced) {
                col_stack.pop_back();
                pos_stack.pop_back();
                if (!row_stack.empty()) {
                    row_stack.pop_back();
                }
            }
        }
        if (free_row == kNone) {
            continue;
        }
        // row_stack[k] is the row reached from col_stack[k]
        for (std::size_t k = 0; k < col_stack.size(); ++k) {
            const Index j = col_stack[k];
            const Index i = row_stack[k];
            m.row_for_col[j] = i;
            col_for_row[i] = j;
        }
        ++m.cardinality;
    }
    return m;
}

ScalingPair scalings_from_duals(const std::vector<double>& u, const std::vector<double>& v,
                                const std::vector<double>& column_maxima)
{
    if (u.size() != v.size() || v.size() != column_maxima.size()) {
        throw std::invalid_argument("scalings_from_duals: length mismatch");
    }
    ScalingPair s;
    s.row.resize(u.size());
    s.col.resize(v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            throw std::domain_error("scalings_from_duals: row dual " + std::to_string(i) + " is not finite");
        }
        s.row[i] = std::exp(u[i]);
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!std::isfinite(v[j]) || !(column_maxima[j] > 0.0)) {
            throw std::domain_error("scalings_from_duals: column " + std::to_string(j) + " has no finite scaling");
        }
        s.col[j] = std::exp(v[j]) / column_maxima[j];
    }
    if (!s.is_valid()) {
        throw std::domain_error("scalings_from_duals: scaling overflowed");
    }
    return s;
}

MatchingResult maximum_weight_matching(const CscMatrix& a)
{
    const Index n = a.n();
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();

    MatchingResult result;

    // c_ij = log(colmax_j) - log|a_ij|; entries too small to take a log of are absent.
    std::vector<double> colmax(n, 0.0);
    std::vector<double> cost(a.nnz(), kInf);
    std::vector<Index> usable_ptr(n + 1, 0);
    std::vector<Index> usable_rows;
    usable_rows.reserve(a.nnz());
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            colmax[j] = std::max(colmax[j], std::abs(va[p]));
        }
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const double mag = std::abs(va[p]);
            if (mag < kTinyMagnitude) {
                ++result.tiny_entries_ignored;
                continue;
            }
            cost[p] = std::log(colmax[j]) - std::log(mag);
            usable_rows.push_back(ri[p]);
        }
        usable_ptr[j + 1] = static_cast<Index>(usable_rows.size());
    }
    const SparsityPattern usable(n, usable_ptr, usable_rows);

    auto singular = [&] {
        return StructurallySingular(n, maximum_cardinality_matching(usable).cardinality);
    };

    // Dual start: v_j = min_i c_ij, u_i = min_j (c_ij - v_j).
    std::vector<double> u(n, kInf), v(n, kInf);
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            v[j] = std::min(v[j], cost[p]);
        }
        if (v[j] == kInf) {
            throw singular();
        }
    }
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            if (cost[p] < kInf) {
                u[ri[p]] = std::min(u[ri[p]], cost[p] - v[j]);
            }
        }
    }
    for (Index i = 0; i < n; ++i) {
        if (u[i] == kInf) {
            throw singular();
        }
    }

    std::vector<Index> row_for_col(n, kNone), col_for_row(n, kNone);
    auto reduced = [&](Index p, Index j) { return std::max(0.0, cost[p] - u[ri[p]] - v[j]); };

    // greedy assignment on tight edges
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            if (cost[p] < kInf && col_for_row[ri[p]] == kNone && reduced(p, j) == 0.0) {
                row_for_col[j] = ri[p];
                col_for_row[ri[p]] = j;
                break;
            }
        }
    }

    std::vector<double> dist(n, kInf);
    std::vector<Index> pred_col(n, kNone);
    std::vector<char> done(n, 0);
    std::vector<Index> touched, finalized;
    using Item = std::pair<double, Index>;

    for (Index root = 0; root < n; ++root) {
        if (row_for_col[root] != kNone) {
            continue;
        }
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        auto relax = [&](Index j, double dj) {
            for (Index p = cp[j]; p < cp[j + 1]; ++p) {
                if (cost[p] == kInf) {
                    continue;
                }
                const Index i = ri[p];
                if (done[i]) {
                    continue;
                }
                const double nd = dj + reduced(p, j);
                if (nd < dist[i]) {
                    if (dist[i] == kInf) {
                        touched.push_back(i);
                    }
                    dist[i] = nd;
                    pred_col[i] = j;
                    heap.emplace(nd, i);
                }
            }
        };

        relax(root, 0.0);
        Index end_row = kNone;
        double path_len = 0.0;
        while (!heap.empty()) {
            auto [d, i] = heap.top();
            heap.pop();
            if (done[i] || d > dist[i]) {
                continue;
            }
            done[i] = 1;
            if (col_for_row[i] == kNone) {
                end_row = i;
                path_len = d;
                break;
            }
            finalized.push_back(i);
            relax(col_for_row[i], d);
        }
        if (end_row == kNone) {
            throw singular();
        }

        // p'(x) = p(x) + min(d(x), L) - L keeps reduced costs nonnegative and the path tight
        v[root] += path_len;
        for (Index i : finalized) {
            u[i] += dist[i] - path_len;
            v[col_for_row[i]] += path_len - dist[i];
        }

        for (Index i = end_row;;) {
            const Index j = pred_col[i];
            const Index next = row_for_col[j];
            row_for_col[j] = i;
            col_for_row[i] = j;
            if (j == root) {
                break;
            }
            i = next;
        }

        for (Index i : touched) {
            dist[i] = kInf;
            done[i] = 0;
            pred_col[i] = kNone;
        }
        touched.clear();
        finalized.clear();
    }

    result.scaling = scalings_from_duals(u, v, colmax);
    result.row_for_col = std::move(row_for_col);
    result.u = std::move(u);
    result.v = std::move(v);
    return result;
}

}  // namespace sparsedirect
