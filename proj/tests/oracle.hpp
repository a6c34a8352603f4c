// Dense brute-force references used by the tests. Nothing here calls the library's
// algorithms; inputs are converted to dense arrays first.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"
#include "sparsedirect/ordering.hpp"

namespace oracle {

using sparsedirect::CscMatrix;
using sparsedirect::Index;
using sparsedirect::kNone;
using sparsedirect::SparsityPattern;

using Dense = std::vector<std::vector<double>>;
using Mask = std::vector<std::vector<char>>;

inline Dense to_dense(const CscMatrix& a)
{
    Dense d(a.n(), std::vector<double>(a.n(), 0.0));
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto v = a.values();
    for (Index j = 0; j < a.n(); ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            d[ri[p]][j] = v[p];
        }
    }
    return d;
}

inline Mask to_mask(const SparsityPattern& p)
{
    Mask m(p.n(), std::vector<char>(p.n(), 0));
    auto cp = p.col_ptr();
    auto ri = p.row_idx();
    for (Index j = 0; j < p.n(); ++j) {
        for (Index k = cp[j]; k < cp[j + 1]; ++k) {
            m[ri[k]][j] = 1;
        }
    }
    return m;
}

inline SparsityPattern from_mask(const Mask& m)
{
    const Index n = static_cast<Index>(m.size());
    std::vector<Index> ptr{0}, rows;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (m[i][j]) {
                rows.push_back(i);
            }
        }
        ptr.push_back(static_cast<Index>(rows.size()));
    }
    return {n, ptr, rows};
}

/// |A| + |A|^T plus the diagonal.
inline Mask symmetrize(const Mask& m)
{
    const std::size_t n = m.size();
    Mask s(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        s[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i][j]) {
                s[i][j] = s[j][i] = 1;
            }
        }
    }
    return s;
}

/// Symbolic Gaussian elimination on a symmetric mask; returns the filled mask.
inline Mask eliminate(Mask f)
{
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) {
            if (!f[i][k]) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (f[k][j]) {
                    f[i][j] = 1;
                }
            }
        }
    }
    return f;
}

/// parent[j] = min { i > j : filled(i, j) }.
inline std::vector<Index> etree_of_filled(const Mask& f)
{
    const Index n = static_cast<Index>(f.size());
    std::vector<Index> parent(n, kNone);
    for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i < n; ++i) {
            if (f[i][j]) {
                parent[j] = i;
                break;
            }
        }
    }
    return parent;
}

inline std::vector<std::vector<Index>> strict_lower_columns(const Mask& f)
{
    const Index n = static_cast<Index>(f.size());
    std::vector<std::vector<Index>> cols(n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i < n; ++i) {
            if (f[i][j]) {
                cols[j].push_back(i);
            }
        }
    }
    return cols;
}

/// Maximal runs with struct(j) = {j + 1} u struct(j + 1).
inline std::vector<Index> supernode_sizes(const Mask& f)
{
    const auto cols = strict_lower_columns(f);
    const Index n = static_cast<Index>(f.size());
    std::vector<Index> sizes;
    for (Index j = 0; j < n; ++j) {
        bool joins = false;
        if (j > 0) {
            std::vector<Index> expect{j};
            expect.insert(expect.end(), cols[j].begin(), cols[j].end());
            joins = cols[j - 1] == expect;
        }
        if (joins) {
            ++sizes.back();
        } else {
            sizes.push_back(1);
        }
    }
    return sizes;
}

/// Doolittle LU without pivoting. L unit lower, U upper.
inline std::pair<Dense, Dense> lu_nopivot(const Dense& a)
{
    const std::size_t n = a.size();
    Dense u = a;
    Dense l(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        l[k][k] = 1.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            l[i][k] = u[i][k] / u[k][k];
            u[i][k] = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                u[i][j] -= l[i][k] * u[k][j];
            }
        }
    }
    return {l, u};
}

inline Dense multiply(const Dense& a, const Dense& b)
{
    const std::size_t n = a.size();
    Dense c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

inline std::vector<double> multiply(const Dense& a, const std::vector<double>& x)
{
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            y[i] += a[i][j] * x[j];
        }
    }
    return y;
}

inline std::vector<double> forward_subst(const Dense& l, std::vector<double> b)
{
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            b[i] -= l[i][j] * b[j];
        }
        b[i] /= l[i][i];
    }
    return b;
}

inline std::vector<double> backward_subst(const Dense& u, std::vector<double> b)
{
    for (std::size_t i = b.size(); i-- > 0;) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            b[i] -= u[i][j] * b[j];
        }
        b[i] /= u[i][i];
    }
    return b;
}

inline double max_abs(const Dense& a)
{
    double m = 0.0;
    for (const auto& row : a) {
        for (double x : row) {
            m = std::max(m, std::abs(x));
        }
    }
    return m;
}

/// Largest |prod_j a(sigma(j), j)| over all permutations.
inline double max_diagonal_product(const Dense& a)
{
    std::vector<std::size_t> sigma(a.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    double best = 0.0;
    do {
        double p = 1.0;
        for (std::size_t j = 0; j < a.size() && p != 0.0; ++j) {
            p *= std::abs(a[sigma[j]][j]);
        }
        best = std::max(best, p);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

/// Largest number of positions (sigma(j), j) in the mask over all permutations.
inline Index max_matching_size(const Mask& m)
{
    std::vector<std::size_t> sigma(m.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    Index best = 0;
    do {
        Index c = 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            c += m[sigma[j]][j] ? 1 : 0;
        }
        best = std::max(best, c);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

inline Index cut_of(const sparsedirect::Graph& g, const std::vector<int>& side)
{
    Index cut = 0;
    for (Index v = 0; v < g.size(); ++v) {
        for (Index k = g.xadj[v]; k < g.xadj[v + 1]; ++k) {
            if (side[v] != side[g.adjncy[k]]) {
                cut += g.adjwgt[k];
            }
        }
    }
    return cut / 2;
}

/// Minimum edge cut over all bisections whose parts both stay within `limit`.
inline Index min_balanced_cut(const sparsedirect::Graph& g, double limit)
{
    const Index n = g.size();
    Index best = -1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> side(n);
        Index w0 = 0, w1 = 0;
        for (Index v = 0; v < n; ++v) {
            side[v] = (mask >> v) & 1u;
            (side[v] ? w1 : w0) += g.vwgt[v];
        }
        if (w0 > limit || w1 > limit) {
            continue;
        }
        const Index c = cut_of(g, side);
        if (best < 0 || c < best) {
            best = c;
        }
    }
    return best;
}

/// Random symmetric mask with full diagonal and roughly `density` off-diagonal fill.
inline Mask random_symmetric_mask(Index n, double density, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(density);
    Mask m(n, std::vector<char>(n, 0));
    for (Index i = 0; i < n; ++i) {
        m[i][i] = 1;
        for (Index j = 0; j < i; ++j) {
            if (coin(rng)) {
                m[i][j] = m[j][i] = 1;
            }
        }
    }
    return m;
}

}  // namespace oracle
