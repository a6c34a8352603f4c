#include "sparsedirect/sparse_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sparsedirect {

SparsityPattern symmetrized_pattern(const SparsityPattern& a)
{
    const Index n = a.n();
    auto cp = a.col_ptr();
    auto ri = a.row_idx();

    // Column j of A^T holds the rows i with a_ji != 0; count per column first.
    std::vector<Index> count(n, 1);  // diagonal
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const Index i = ri[p];
            if (i != j) {
                ++count[j];
                ++count[i];
            }
        }
    }
    std::vector<Index> ptr(n + 1, 0);
    for (Index j = 0; j < n; ++j) {
        ptr[j + 1] = ptr[j] + count[j];
    }
    std::vector<Index> rows(ptr[n]);
    std::vector<Index> next(ptr.begin(), ptr.end() - 1);
    for (Index j = 0; j < n; ++j) {
        rows[next[j]++] = j;
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const Index i = ri[p];
            if (i != j) {
                rows[next[j]++] = i;
                rows[next[i]++] = j;
            }
        }
    }

    // sort and dedupe each column, compacting in place
    std::vector<Index> out_ptr(n + 1, 0);
    Index w = 0;
    for (Index j = 0; j < n; ++j) {
        auto first = rows.begin() + ptr[j];
        auto last = rows.begin() + ptr[j + 1];
        std::sort(first, last);
        last = std::unique(first, last);
        for (auto it = first; it != last; ++it) {
            rows[w++] = *it;
        }
        out_ptr[j + 1] = w;
    }
    rows.resize(w);
    return {n, std::move(out_ptr), std::move(rows)};
}

CscMatrix apply_transform(const CscMatrix& a, const Permutation& row_perm, const Permutation& col_perm,
                          const ScalingPair& s)
{
    const Index n = a.n();
    if (row_perm.size() != n || col_perm.size() != n || static_cast<Index>(s.row.size()) != n ||
        static_cast<Index>(s.col.size()) != n) {
        throw std::invalid_argument("apply_transform: dimension mismatch");
    }
    const Permutation row_pos = row_perm.inverse();  // original row -> new position
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();

    std::vector<Index> ptr(n + 1, 0);
    for (Index q = 0; q < n; ++q) {
        const Index j = col_perm[q];
        ptr[q + 1] = ptr[q] + (cp[j + 1] - cp[j]);
    }
    std::vector<Index> rows(a.nnz());
    std::vector<double> vals(a.nnz());
    std::vector<std::pair<Index, double>> buf;
    for (Index q = 0; q < n; ++q) {
        const Index j = col_perm[q];
        buf.clear();
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const Index i = ri[p];
            buf.emplace_back(row_pos[i], s.row[i] * va[p] * s.col[j]);
        }
        std::sort(buf.begin(), buf.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        Index w = ptr[q];
        for (const auto& [r, v] : buf) {
            rows[w] = r;
            vals[w] = v;
            ++w;
        }
    }
    return {n, std::move(ptr), std::move(rows), std::move(vals)};
}

CscMatrix permute_symmetric(const CscMatrix& a, const Permutation& p)
{
    return apply_transform(a, p, p, ScalingPair::unit(a.n()));
}

std::vector<double> dominance_profile(const CscMatrix& a)
{
    const Index n = a.n();
    std::vector<double> diag(n, 0.0), rowsum(n, 0.0);
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const double m = std::abs(va[p]);
            rowsum[ri[p]] += m;
            if (ri[p] == j) {
                diag[j] = m;
            }
        }
    }
    std::vector<double> r(n, 0.0);
    for (Index i = 0; i < n; ++i) {
        if (rowsum[i] > 0.0) {
            r[i] = std::min(1.0, diag[i] / rowsum[i]);
        }
    }
    return r;
}

Index count_dominant_rows(std::span<const double> profile)
{
    return std::count_if(profile.begin(), profile.end(), [](double r) { return r > 0.5; });
}

CscMatrix transpose(const CscMatrix& a)
{
    const Index n = a.n();
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();
    std::vector<Index> ptr(n + 1, 0);
    for (Index p = 0; p < a.nnz(); ++p) {
        ++ptr[ri[p] + 1];
    }
    std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
    std::vector<Index> next(ptr.begin(), ptr.end() - 1);
    std::vector<Index> rows(a.nnz());
    std::vector<double> vals(a.nnz());
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const Index w = next[ri[p]]++;
            rows[w] = j;
            vals[w] = va[p];
        }
    }
    return {n, std::move(ptr), std::move(rows), std::move(vals)};
}

std::vector<double> multiply(const CscMatrix& a, std::span<const double> x)
{
    if (static_cast<Index>(x.size()) != a.n()) {
        throw std::invalid_argument("multiply: dimension mismatch");
    }
    std::vector<double> y(a.n(), 0.0);
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();
    for (Index j = 0; j < a.n(); ++j) {
        const double xj = x[j];
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            y[ri[p]] += va[p] * xj;
        }
    }
    return y;
}

double norm_inf(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace sparsedirect
