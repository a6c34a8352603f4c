#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"
#include "sparsedirect/matching.hpp"
#include "sparsedirect/numeric.hpp"
#include "sparsedirect/ordering.hpp"
#include "sparsedirect/symbolic.hpp"

namespace sparsedirect {

enum class OrderingMethod { NestedDissection, MinimumDegree, Natural };

struct SolverOptions {
    bool matching = true;
    OrderingMethod ordering = OrderingMethod::NestedDissection;
    Index nd_leaf_size = 64;
    int threads = 1;
    Index panel_cap = 128;
    double pivot_scale = 1e-14;

    FactorOptions factor_options() const { return {panel_cap, pivot_scale, threads}; }
};

/// Wall-clock seconds per stage.
struct StageTimes {
    double matching = 0.0;
    double ordering = 0.0;
    double symbolic = 0.0;
    double factorize = 0.0;
    double solve = 0.0;
};

/// Everything computed before numeric factorization.
///
/// The factorized matrix is T(p, q) = d_r[i] * a(i, j) * d_c[j] with
/// i = row_perm[p] and j = col_perm[q].
struct Analysis {
    std::optional<MatchingResult> matching;
    Permutation row_perm;
    Permutation col_perm;
    ScalingPair scaling;
    OrderingResult ordering;
    CscMatrix transformed;
    SymbolicFactor symbolic;
    PartPlan plan;
    std::shared_ptr<const PanelLayout> layout;
    StageTimes times;
};

/// Matching, ordering and symbolic analysis. Throws StructurallySingular.
Analysis analyze(const CscMatrix& a, const SolverOptions& opt = {});

/// Applies the analysis permutations and scalings to a matrix with a's pattern.
CscMatrix transform(const Analysis& an, const CscMatrix& a);

SupernodalFactor factorize(const Analysis& an, const SolverOptions& opt = {});

/// Solves A x = b with an existing factor of transform(an, A).
std::vector<double> solve_with(const Analysis& an, const SupernodalFactor& f, std::span<const double> b,
                               int threads = 1);

/// ||A x - b||_inf / (||A||_max ||x||_inf + ||b||_inf)
double relative_residual(const CscMatrix& a, std::span<const double> x, std::span<const double> b);

struct SolveReport {
    double residual = 0.0;
    Index perturbations = 0;
    StageTimes times;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

SolveResult solve(const CscMatrix& a, std::span<const double> b, const SolverOptions& opt = {});

/// One row of the incremental refactorization sweep.
struct SweepRow {
    Index k = 0;             ///< number of perturbed columns
    Index closure = 0;       ///< columns recomputed
    double t_incremental = 0.0;
    double t_full = 0.0;
    double max_diff = 0.0;   ///< max |incremental - full| over lnz and unz
};

/// Perturbs nested random sets of k columns of the transformed matrix for k = 0, 1, 2, 4, ..., n
/// and times incremental against full refactorization in thread CPU seconds, keeping the
/// fastest of `reps` runs. Runs are interleaved across k.
std::vector<SweepRow> incremental_sweep(const Analysis& an, std::uint64_t seed, int reps = 3);

}  // namespace sparsedirect
