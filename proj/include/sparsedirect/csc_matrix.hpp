#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsedirect {

using Index = std::int64_t;

/// Marks a root in parent arrays and an unmatched slot in matchings.
inline constexpr Index kNone = -1;

/// Nonzero structure of a square matrix in compressed sparse column form.
///
/// Row indices are sorted and unique within each column. Every constructor
/// that takes raw arrays validates them.
class SparsityPattern {
public:
    SparsityPattern() = default;
    SparsityPattern(Index n, std::vector<Index> col_ptr, std::vector<Index> row_idx);

    Index n() const { return n_; }
    Index nnz() const { return static_cast<Index>(row_idx_.size()); }

    std::span<const Index> col_ptr() const { return col_ptr_; }
    std::span<const Index> row_idx() const { return row_idx_; }
    std::span<const Index> column(Index j) const
    {
        return {row_idx_.data() + col_ptr_[j], static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
    }

    bool contains(Index i, Index j) const;
    bool is_symmetric() const;

    friend bool operator==(const SparsityPattern&, const SparsityPattern&) = default;

private:
    Index n_ = 0;
    std::vector<Index> col_ptr_{0};
    std::vector<Index> row_idx_;
};

/// Square sparse matrix in CSC storage with 64-bit values.
class CscMatrix {
public:
    CscMatrix() = default;
    CscMatrix(Index n, std::vector<Index> col_ptr, std::vector<Index> row_idx, std::vector<double> values);

    struct Triplet {
        Index row;
        Index col;
        double value;
    };

    /// Builds from coordinate entries. Duplicates are summed, resulting zeros dropped.
    static CscMatrix from_triplets(Index n, std::vector<Triplet> entries);
    static CscMatrix identity(Index n);

    Index n() const { return n_; }
    Index nnz() const { return static_cast<Index>(row_idx_.size()); }

    std::span<const Index> col_ptr() const { return col_ptr_; }
    std::span<const Index> row_idx() const { return row_idx_; }
    std::span<const double> values() const { return values_; }
    std::span<double> mutable_values() { return values_; }

    /// Value at (i, j), zero if not stored. Binary search within the column.
    double at(Index i, Index j) const;
    double max_abs() const;

    SparsityPattern pattern() const { return {n_, col_ptr_, row_idx_}; }
    bool same_pattern(const CscMatrix& other) const
    {
        return n_ == other.n_ && col_ptr_ == other.col_ptr_ && row_idx_ == other.row_idx_;
    }

    friend bool operator==(const CscMatrix&, const CscMatrix&) = default;

private:
    Index n_ = 0;
    std::vector<Index> col_ptr_{0};
    std::vector<Index> row_idx_;
    std::vector<double> values_;
};

/// perm[k] is the original index placed at position k.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<Index> perm);
    static Permutation identity(Index n);

    Index size() const { return static_cast<Index>(perm_.size()); }
    Index operator[](Index k) const { return perm_[k]; }
    std::span<const Index> data() const { return perm_; }

    Permutation inverse() const;
    /// Position k of the result holds this->perm[inner[k]]: apply `inner` first, then this.
    Permutation compose(const Permutation& inner) const;

    static bool is_valid(std::span<const Index> perm);

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<Index> perm_;
};

struct ScalingPair {
    std::vector<double> row;
    std::vector<double> col;

    static ScalingPair unit(Index n) { return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)}; }
    bool is_valid() const;
};

}  // namespace sparsedirect
