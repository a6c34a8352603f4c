#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"
#include "sparsedirect/ordering.hpp"
#include "sparsedirect/symbolic.hpp"

namespace sparsedirect {

/// Column ranges that can be processed independently, plus the serial separator tail.
struct PartPlan {
    struct Range {
        Index begin;
        Index end;
    };
    std::vector<Range> parts;
    Index sep_start = 0;  ///< separator is [sep_start, n); equals n when empty
};

/// Parts from the root of a separator tree: one part per child subtree, the root
/// separator as serial tail. Falls back to a single part when no ordering tree is
/// given or the factor pattern would let a part touch another part's columns.
PartPlan build_parts(const SymbolicFactor& sym, const OrderingResult* ordering);

/// Index structure of the supernodal factor. Shared between factors of matrices
/// with the same pattern.
struct PanelLayout {
    Index n = 0;
    std::vector<Index> xsuper;  ///< first column of each panel, xsuper.back() = n
    std::vector<Index> xlnz;    ///< start of each column in lnz/unz, xlnz.back() = size
    std::vector<Index> xindx;   ///< start of each panel's row list in indx
    std::vector<Index> indx;    ///< panel row lists: panel columns first, then rows below
    std::vector<Index> col_panel;

    struct PanelRange {
        Index begin;
        Index end;
    };
    std::vector<PanelRange> parts;  ///< panel ranges of the independent parts
    Index sep_start = 0;            ///< first column of the separator
    Index sep_panel = 0;            ///< first panel of the separator

    EliminationForest tree;
    std::vector<std::vector<Index>> updaters;      ///< descendant panels updating each panel, ascending
    std::vector<std::vector<Index>> panel_levels;  ///< panel level schedule for tree-parallel factorization

    SparsityPattern matrix_pattern;  ///< pattern of the matrix the layout was built for
    std::vector<Index> row_ptr;      ///< row-wise access to that pattern:
    std::vector<Index> row_col;      ///<   columns of row i are row_col[row_ptr[i]..row_ptr[i+1])
    std::vector<Index> row_src;      ///<   with value index row_src[...] into the CSC values

    Index panel_count() const { return static_cast<Index>(xsuper.size()) - 1; }
    Index panel_width(Index p) const { return xsuper[p + 1] - xsuper[p]; }
    Index panel_rows(Index p) const { return xindx[p + 1] - xindx[p]; }
    std::span<const Index> rows(Index p) const
    {
        return {indx.data() + xindx[p], static_cast<std::size_t>(panel_rows(p))};
    }
    Index storage_size() const { return xlnz.back(); }
};

struct FactorOptions {
    Index panel_cap = 128;
    double pivot_scale = 1e-14;  ///< pivots below pivot_scale * max|a_ij| are perturbed
    int threads = 1;             ///< > 1 runs independent subtrees concurrently
};

/// Splits supernodes at the panel cap and at part boundaries and builds the panel index arrays.
std::shared_ptr<const PanelLayout> build_layout(const CscMatrix& a, const SymbolicFactor& sym,
                                                const PartPlan& plan, const FactorOptions& opt = {});

/// Static-pivot LU of a matrix whose pattern is covered by the symbolic factor.
///
/// Panel p stores L and U^T as dense |rows(p)| x width(p) column-major blocks at
/// lnz/unz[xlnz[xsuper[p]]]. Column j of a panel starts with padding zeros above its
/// diagonal position. L has an implicit unit diagonal; U's diagonal sits in unz.
struct SupernodalFactor {
    std::shared_ptr<const PanelLayout> layout;
    std::vector<double> lnz;
    std::vector<double> unz;
    std::vector<char> perturbed;  ///< per column
    Index perturbations = 0;
    double pivot_floor = 0.0;
    std::vector<double> source_values;  ///< values of the factorized matrix

    Index n() const { return layout ? layout->n : 0; }
    /// L(i, j) for i > j or U(j, i) for i >= j, if (i, j) lies in the panel structure.
    double l_entry(Index i, Index j) const;
    double u_entry(Index i, Index j) const;
    double max_abs_entry() const;
};

SupernodalFactor factorize(const CscMatrix& a, std::shared_ptr<const PanelLayout> layout,
                           const FactorOptions& opt = {});
SupernodalFactor factorize(const CscMatrix& a, const SymbolicFactor& sym, const PartPlan& plan,
                           const FactorOptions& opt = {});

/// Recomputes only the etree-ancestor closure of the factor columns touched by the
/// entries that changed. An entry (i, j) affects factor column min(i, j).
/// `a` must have the pattern `f` was built for and may differ only in `changed_cols`.
SupernodalFactor refactorize_incremental(const SupernodalFactor& f, const CscMatrix& a,
                                         const std::vector<Index>& changed_cols,
                                         std::vector<Index>* recomputed = nullptr);

/// In-place form of refactorize_incremental; `f` is updated to the factor of `a`.
void refactorize_incremental_in_place(SupernodalFactor& f, const CscMatrix& a,
                                      const std::vector<Index>& changed_cols,
                                      std::vector<Index>* recomputed = nullptr);

/// Debug dump: JSON metadata plus a little-endian binary blob holding lnz then unz.
void write_factor_dump(const SupernodalFactor& f, const std::string& json_path, const std::string& blob_path);

struct FactorDump {
    Index n = 0;
    std::vector<Index> xsuper, xlnz, xindx, indx;
    std::vector<std::pair<Index, Index>> parts;
    Index sep_start = 0;
    Index perturbations = 0;
    std::vector<double> lnz, unz;
};
FactorDump read_factor_dump(const std::string& json_path);

}  // namespace sparsedirect
