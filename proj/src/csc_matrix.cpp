#include "sparsedirect/csc_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsedirect {

namespace {

void validate_structure(Index n, std::span<const Index> col_ptr, std::span<const Index> row_idx, const char* what)
{
    if (n < 0) {
        throw std::invalid_argument(std::string(what) + ": negative dimension");
    }
    if (static_cast<Index>(col_ptr.size()) != n + 1 || col_ptr.front() != 0 ||
        col_ptr.back() != static_cast<Index>(row_idx.size())) {
        throw std::invalid_argument(std::string(what) + ": col_ptr inconsistent with row_idx");
    }
    for (Index j = 0; j < n; ++j) {
        if (col_ptr[j + 1] < col_ptr[j]) {
            throw std::invalid_argument(std::string(what) + ": col_ptr decreasing at column " + std::to_string(j));
        }
        for (Index p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
            if (row_idx[p] < 0 || row_idx[p] >= n) {
                throw std::invalid_argument(std::string(what) + ": row index out of range in column " +
                                            std::to_string(j));
            }
            if (p > col_ptr[j] && row_idx[p] <= row_idx[p - 1]) {
                throw std::invalid_argument(std::string(what) + ": unsorted or duplicate rows in column " +
                                            std::to_string(j));
            }
        }
    }
}

}  // namespace

SparsityPattern::SparsityPattern(Index n, std::vector<Index> col_ptr, std::vector<Index> row_idx)
    : n_(n), col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx))
{
    validate_structure(n_, col_ptr_, row_idx_, "SparsityPattern");
}

bool SparsityPattern::contains(Index i, Index j) const
{
    auto col = column(j);
    return std::binary_search(col.begin(), col.end(), i);
}

bool SparsityPattern::is_symmetric() const
{
    for (Index j = 0; j < n_; ++j) {
        for (Index i : column(j)) {
            if (!contains(j, i)) {
                return false;
            }
        }
    }
    return true;
}

CscMatrix::CscMatrix(Index n, std::vector<Index> col_ptr, std::vector<Index> row_idx, std::vector<double> values)
    : n_(n), col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx)), values_(std::move(values))
{
    validate_structure(n_, col_ptr_, row_idx_, "CscMatrix");
    if (values_.size() != row_idx_.size()) {
        throw std::invalid_argument("CscMatrix: values and row_idx differ in length");
    }
}

CscMatrix CscMatrix::from_triplets(Index n, std::vector<Triplet> entries)
{
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
            throw std::invalid_argument("from_triplets: entry out of range");
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });

    std::vector<Index> col_ptr(n + 1, 0);
    std::vector<Index> rows;
    std::vector<double> vals;
    rows.reserve(entries.size());
    vals.reserve(entries.size());

    std::size_t p = 0;
    while (p < entries.size()) {
        std::size_t q = p;
        double sum = 0.0;
        while (q < entries.size() && entries[q].row == entries[p].row && entries[q].col == entries[p].col) {
            sum += entries[q].value;
            ++q;
        }
        if (sum != 0.0) {
            rows.push_back(entries[p].row);
            vals.push_back(sum);
            ++col_ptr[entries[p].col + 1];
        }
        p = q;
    }
    std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
    return {n, std::move(col_ptr), std::move(rows), std::move(vals)};
}

CscMatrix CscMatrix::identity(Index n)
{
    std::vector<Index> col_ptr(n + 1);
    std::vector<Index> rows(n);
    std::iota(col_ptr.begin(), col_ptr.end(), Index{0});
    std::iota(rows.begin(), rows.end(), Index{0});
    return {n, std::move(col_ptr), std::move(rows), std::vector<double>(n, 1.0)};
}

double CscMatrix::at(Index i, Index j) const
{
    auto first = row_idx_.begin() + col_ptr_[j];
    auto last = row_idx_.begin() + col_ptr_[j + 1];
    auto it = std::lower_bound(first, last, i);
    if (it == last || *it != i) {
        return 0.0;
    }
    return values_[it - row_idx_.begin()];
}

double CscMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Permutation::Permutation(std::vector<Index> perm) : perm_(std::move(perm))
{
    if (!is_valid(perm_)) {
        throw std::invalid_argument("Permutation: not a bijection");
    }
}

Permutation Permutation::identity(Index n)
{
    std::vector<Index> p(n);
    std::iota(p.begin(), p.end(), Index{0});
    return Permutation(std::move(p));
}

Permutation Permutation::inverse() const
{
    std::vector<Index> inv(perm_.size());
    for (std::size_t k = 0; k < perm_.size(); ++k) {
        inv[perm_[k]] = static_cast<Index>(k);
    }
    return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& inner) const
{
    if (inner.size() != size()) {
        throw std::invalid_argument("Permutation::compose: size mismatch");
    }
    std::vector<Index> out(perm_.size());
    for (std::size_t k = 0; k < perm_.size(); ++k) {
        out[k] = perm_[inner.perm_[k]];
    }
    return Permutation(std::move(out));
}

bool Permutation::is_valid(std::span<const Index> perm)
{
    std::vector<char> seen(perm.size(), 0);
    for (Index p : perm) {
        if (p < 0 || p >= static_cast<Index>(perm.size()) || seen[p]) {
            return false;
        }
        seen[p] = 1;
    }
    return true;
}

bool ScalingPair::is_valid() const
{
    auto ok = [](double d) { return std::isfinite(d) && d > 0.0; };
    return row.size() == col.size() && std::all_of(row.begin(), row.end(), ok) &&
           std::all_of(col.begin(), col.end(), ok);
}

}  // namespace sparsedirect
