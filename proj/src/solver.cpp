#include "sparsedirect/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <time.h>

#include "sparsedirect/sparse_ops.hpp"
#include "sparsedirect/trisolve.hpp"

namespace sparsedirect {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// CPU time of the calling thread; the sweep runs serially and this ignores steal time.
double thread_seconds()
{
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

}  // namespace

Analysis analyze(const CscMatrix& a, const SolverOptions& opt)
{
    const Index n = a.n();
    Analysis an;
    auto t0 = Clock::now();
    Permutation matched = Permutation::identity(n);
    an.scaling = ScalingPair::unit(n);
    if (opt.matching) {
        an.matching = maximum_weight_matching(a);
        matched = an.matching->row_permutation();
        an.scaling = an.matching->scaling;
    } else {
        const auto card = maximum_cardinality_matching(a.pattern());
        if (!card.perfect()) {
            throw StructurallySingular(n, card.cardinality);
        }
    }
    an.times.matching = seconds_since(t0);

    t0 = Clock::now();
    const CscMatrix b = apply_transform(a, matched, Permutation::identity(n), an.scaling);
    const SparsityPattern g = symmetrized_pattern(b);
    switch (opt.ordering) {
    case OrderingMethod::NestedDissection: {
        NestedDissectionOptions nd;
        nd.leaf_size = opt.nd_leaf_size;
        an.ordering = nested_dissection(g, nd);
        break;
    }
    case OrderingMethod::MinimumDegree:
        an.ordering = single_leaf_ordering(minimum_degree(g));
        break;
    case OrderingMethod::Natural:
        an.ordering = single_leaf_ordering(Permutation::identity(n));
        break;
    }
    an.row_perm = matched.compose(an.ordering.perm);
    an.col_perm = an.ordering.perm;
    an.times.ordering = seconds_since(t0);

    t0 = Clock::now();
    an.transformed = apply_transform(a, an.row_perm, an.col_perm, an.scaling);
    an.symbolic = supernode_partition(symmetrized_pattern(an.transformed));
    an.plan = build_parts(an.symbolic, &an.ordering);
    an.layout = build_layout(an.transformed, an.symbolic, an.plan, opt.factor_options());
    an.times.symbolic = seconds_since(t0);
    return an;
}

CscMatrix transform(const Analysis& an, const CscMatrix& a)
{
    return apply_transform(a, an.row_perm, an.col_perm, an.scaling);
}

SupernodalFactor factorize(const Analysis& an, const SolverOptions& opt)
{
    return factorize(an.transformed, an.layout, opt.factor_options());
}

std::vector<double> solve_with(const Analysis& an, const SupernodalFactor& f, std::span<const double> b, int threads)
{
    const Index n = f.n();
    if (static_cast<Index>(b.size()) != n) {
        throw std::invalid_argument("solve: right-hand side length does not match the matrix");
    }
    SolveWorkspace w(f);
    for (Index k = 0; k < n; ++k) {
        const Index i = an.row_perm[k];
        w.r[k] = an.scaling.row[i] * b[i];
    }
    forward(f, w, threads);
    backward(f, w, threads);
    std::vector<double> x(n);
    for (Index k = 0; k < n; ++k) {
        const Index j = an.col_perm[k];
        x[j] = an.scaling.col[j] * w.r[k];
    }
    return x;
}

double relative_residual(const CscMatrix& a, std::span<const double> x, std::span<const double> b)
{
    auto ax = multiply(a, x);
    for (std::size_t i = 0; i < ax.size(); ++i) {
        ax[i] -= b[i];
    }
    const double denom = a.max_abs() * norm_inf(x) + norm_inf(b);
    const double num = norm_inf(ax);
    return denom > 0.0 ? num / denom : num;
}

SolveResult solve(const CscMatrix& a, std::span<const double> b, const SolverOptions& opt)
{
    SolveResult out;
    Analysis an = analyze(a, opt);
    auto t0 = Clock::now();
    const SupernodalFactor f = factorize(an, opt);
    an.times.factorize = seconds_since(t0);
    t0 = Clock::now();
    out.x = solve_with(an, f, b, opt.threads);
    an.times.solve = seconds_since(t0);
    out.report.residual = relative_residual(a, out.x, b);
    out.report.perturbations = f.perturbations;
    out.report.times = an.times;
    return out;
}

std::vector<SweepRow> incremental_sweep(const Analysis& an, std::uint64_t seed, int reps)
{
    const CscMatrix& base = an.transformed;
    const Index n = base.n();
    const SupernodalFactor f0 = factorize(base, an.layout);

    std::mt19937_64 rng(seed);
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> factor(0.9, 1.1);
    std::vector<double> scale(n);
    for (double& s : scale) {
        s = factor(rng);
    }

    std::vector<Index> ks{0};
    for (Index k = 1; k < n; k *= 2) {
        ks.push_back(k);
    }
    if (n > 0) {
        ks.push_back(n);
    }

    std::vector<CscMatrix> mats;
    std::vector<SweepRow> rows;
    for (Index k : ks) {
        CscMatrix a2 = base;
        auto cp = a2.col_ptr();
        auto vals = a2.mutable_values();
        for (Index c = 0; c < k; ++c) {
            const Index j = order[c];
            for (Index p = cp[j]; p < cp[j + 1]; ++p) {
                vals[p] *= scale[j];
            }
        }
        mats.push_back(std::move(a2));
        SweepRow row;
        row.k = k;
        row.t_incremental = row.t_full = std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }

    // repetitions are interleaved across k so load drift hits every row alike;
    // every row runs in place on the same buffers, refilled outside the timed region
    SupernodalFactor inc = f0;
    CscMatrix work = base;
    for (int r = 0; r < std::max(reps, 1); ++r) {
        for (std::size_t q = 0; q < ks.size(); ++q) {
            // rotating the start varies what each row runs after
            const std::size_t s = (q + static_cast<std::size_t>(r)) % ks.size();
            const std::vector<Index> changed(order.begin(), order.begin() + ks[s]);
            std::ranges::copy(mats[s].values(), work.mutable_values().begin());
            inc.lnz = f0.lnz;
            inc.unz = f0.unz;
            inc.perturbed = f0.perturbed;
            inc.source_values = f0.source_values;
            std::vector<Index> recomputed;
            double t0 = thread_seconds();
            refactorize_incremental_in_place(inc, work, changed, &recomputed);
            rows[s].t_incremental = std::min(rows[s].t_incremental, thread_seconds() - t0);
            rows[s].closure = static_cast<Index>(recomputed.size());
            t0 = thread_seconds();
            const SupernodalFactor full = factorize(work, an.layout);
            rows[s].t_full = std::min(rows[s].t_full, thread_seconds() - t0);
            if (r == 0) {
                for (std::size_t p = 0; p < full.lnz.size(); ++p) {
                    rows[s].max_diff = std::max({rows[s].max_diff, std::abs(full.lnz[p] - inc.lnz[p]),
                                                 std::abs(full.unz[p] - inc.unz[p])});
                }
            }
        }
    }
    return rows;
}

}  // namespace sparsedirect
