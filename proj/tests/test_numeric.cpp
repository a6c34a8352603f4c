#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracle.hpp"
#include "sparsedirect/gallery.hpp"
#include "sparsedirect/numeric.hpp"
#include "sparsedirect/solver.hpp"
#include "sparsedirect/sparse_ops.hpp"

using namespace sparsedirect;

namespace {

struct Fixture {
    CscMatrix a;
    SymbolicFactor sym;
    PartPlan plan;
};

Fixture natural(const CscMatrix& a)
{
    Fixture f{a, supernode_partition(symmetrized_pattern(a)), {}};
    f.plan = build_parts(f.sym, nullptr);
    return f;
}

oracle::Dense dense_l(const SupernodalFactor& f)
{
    oracle::Dense l(f.n(), std::vector<double>(f.n(), 0.0));
    for (Index i = 0; i < f.n(); ++i) {
        for (Index j = 0; j <= i; ++j) {
            l[i][j] = f.l_entry(i, j);
        }
    }
    return l;
}

oracle::Dense dense_u(const SupernodalFactor& f)
{
    oracle::Dense u(f.n(), std::vector<double>(f.n(), 0.0));
    for (Index i = 0; i < f.n(); ++i) {
        for (Index j = i; j < f.n(); ++j) {
            u[i][j] = f.u_entry(i, j);
        }
    }
    return u;
}

double max_diff(const oracle::Dense& a, const oracle::Dense& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
        }
    }
    return m;
}

/// Padding above each column's diagonal position stays exactly zero.
void check_padding(const SupernodalFactor& f)
{
    const PanelLayout& L = *f.layout;
    for (Index j = 0; j < L.n; ++j) {
        const Index c = j - L.xsuper[L.col_panel[j]];
        for (Index r = 0; r <= c; ++r) {
            CHECK(f.lnz[L.xlnz[j] + r] == 0.0);
            if (r < c) {
                CHECK(f.unz[L.xlnz[j] + r] == 0.0);
            }
        }
    }
}

/// Packs dense L and U into the factor's panel layout.
std::pair<std::vector<double>, std::vector<double>> repack(const PanelLayout& L, const oracle::Dense& l,
                                                           const oracle::Dense& u)
{
    std::vector<double> lnz(L.storage_size(), 0.0), unz(L.storage_size(), 0.0);
    for (Index p = 0; p < L.panel_count(); ++p) {
        auto rows = L.rows(p);
        for (Index j = L.xsuper[p]; j < L.xsuper[p + 1]; ++j) {
            const Index c = j - L.xsuper[p];
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const Index i = rows[r];
                if (static_cast<Index>(r) > c) {
                    lnz[L.xlnz[j] + r] = l[i][j];
                }
                if (static_cast<Index>(r) >= c) {
                    unz[L.xlnz[j] + r] = u[j][i];
                }
            }
        }
    }
    return {lnz, unz};
}

CscMatrix change_column(const CscMatrix& a, Index j, double factor)
{
    CscMatrix b = a;
    auto cp = b.col_ptr();
    auto v = b.mutable_values();
    for (Index p = cp[j]; p < cp[j + 1]; ++p) {
        v[p] *= factor;
    }
    return b;
}

}  // namespace

TEST_SUITE("numeric")
{
    TEST_CASE("identity factor")
    {
        auto f = natural(CscMatrix::identity(5));
        auto fac = factorize(f.a, f.sym, f.plan);
        CHECK(fac.perturbations == 0);
        for (Index i = 0; i < 5; ++i) {
            for (Index j = 0; j < 5; ++j) {
                CHECK(fac.l_entry(i, j) == (i == j ? 1.0 : 0.0));
                CHECK(fac.u_entry(i, j) == (i == j ? 1.0 : 0.0));
            }
        }
    }

    TEST_CASE("partition example: reconstruction and the single fill position")
    {
        auto f = natural(gallery::two_way_partition_example());
        auto fac = factorize(f.a, f.sym, f.plan);
        CHECK(fac.perturbations == 0);
        const auto a = oracle::to_dense(f.a);
        const auto l = dense_l(fac);
        const auto u = dense_u(fac);
        CHECK(max_diff(oracle::multiply(l, u), a) <= 1e-10 * oracle::max_abs(a));

        std::vector<std::pair<int, int>> fill;
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                const double v = i > j ? l[i][j] : u[i][j];
                if (v != 0.0 && a[i][j] == 0.0) {
                    fill.push_back({i, j});
                }
            }
        }
        REQUIRE(fill.size() == 1);
        CHECK(fill[0] == std::pair<int, int>{5, 4});
        CHECK(l[5][1] == 0.0);
        CHECK(u[3][5] == 0.0);
        check_padding(fac);
    }

    TEST_CASE("random dominant 30x30 against dense LU")
    {
        for (int t = 0; t < 100; ++t) {
            auto f = natural(gallery::random_diagonally_dominant(30, 3, 7000 + t));
            FactorOptions opt;
            opt.panel_cap = 1 + t % 8;
            auto fac = factorize(f.a, f.sym, f.plan, opt);
            const auto a = oracle::to_dense(f.a);
            auto [lo, uo] = oracle::lu_nopivot(a);
            const auto l = dense_l(fac);
            const auto u = dense_u(fac);
            CHECK(max_diff(l, lo) <= 1e-11);
            CHECK(max_diff(u, uo) <= 1e-11);
            CHECK(max_diff(oracle::multiply(l, u), a) <= 1e-10 * oracle::max_abs(a));
            CHECK(fac.max_abs_entry() <= 10.0 * f.a.max_abs());
            check_padding(fac);
            auto [lnz, unz] = repack(*fac.layout, l, u);
            CHECK(lnz == fac.lnz);
            CHECK(unz == fac.unz);
        }
    }

    TEST_CASE("tiny pivots are perturbed and counted")
    {
        auto a = CscMatrix::from_triplets(3, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}, {2, 2, 2.0}});
        auto f = natural(a);
        auto fac = factorize(f.a, f.sym, f.plan);
        CHECK(fac.perturbations == 1);
        CHECK(fac.perturbed[1] == 1);
        CHECK(fac.u_entry(1, 1) == fac.pivot_floor);
        CHECK(fac.pivot_floor == 1e-14 * 2.0);
    }

    TEST_CASE("reproducible and thread-count independent")
    {
        auto a = gallery::grid_laplacian(24);
        SolverOptions opt;
        opt.matching = false;
        opt.nd_leaf_size = 16;
        auto an = analyze(a, opt);
        FactorOptions fo;
        fo.panel_cap = 8;
        auto layout = build_layout(an.transformed, an.symbolic, an.plan, fo);
        auto base = factorize(an.transformed, layout, fo);
        CHECK(factorize(an.transformed, layout, fo).lnz == base.lnz);
        for (int threads : {2, 4, 8}) {
            fo.threads = threads;
            auto f = factorize(an.transformed, layout, fo);
            CHECK(f.lnz == base.lnz);
            CHECK(f.unz == base.unz);
        }
    }

    TEST_CASE("build_parts")
    {
        auto diag = natural(CscMatrix::identity(6));
        REQUIRE(diag.plan.parts.size() == 1);
        CHECK(diag.plan.sep_start == 6);

        auto p = symmetrized_pattern(gallery::two_way_partition_example());
        auto ord = nested_dissection(p, {.leaf_size = 2, .partition = {}});
        const CscMatrix ordered = permute_symmetric(gallery::two_way_partition_example(), ord.perm);
        auto sym = supernode_partition(symmetrized_pattern(ordered));
        auto plan = build_parts(sym, &ord);
        CHECK(plan.parts.size() == 2);
        CHECK(6 - plan.sep_start == ord.tree[0].end - ord.tree[0].sep_begin);
        CHECK(6 - plan.sep_start <= 2);

        SolverOptions opt;
        opt.matching = false;
        auto an = analyze(gallery::grid_laplacian(16), opt);
        REQUIRE(an.plan.parts.size() >= 2);
        for (const auto& r : an.plan.parts) {
            for (Index j = r.begin; j < r.end; ++j) {
                for (Index i : an.symbolic.fill.column(j)) {
                    CHECK((i < r.end || i >= an.plan.sep_start));
                }
            }
        }
    }

    TEST_CASE("incremental: no change is a bitwise no-op")
    {
        auto f = natural(gallery::random_diagonally_dominant(20, 3, 1));
        auto fac = factorize(f.a, f.sym, f.plan);
        std::vector<Index> recomputed{99};
        auto same = refactorize_incremental(fac, f.a, {}, &recomputed);
        CHECK(recomputed.empty());
        CHECK(same.lnz == fac.lnz);
        CHECK(same.unz == fac.unz);
    }

    TEST_CASE("incremental: partition example, column 0 recomputes 0 4 5")
    {
        auto f = natural(gallery::two_way_partition_example());
        auto fac = factorize(f.a, f.sym, f.plan);
        auto a2 = change_column(f.a, 0, 1.5);
        std::vector<Index> recomputed;
        auto inc = refactorize_incremental(fac, a2, {0}, &recomputed);
        CHECK(recomputed == std::vector<Index>{0, 4, 5});
        auto full = factorize(a2, fac.layout);
        CHECK(inc.lnz == full.lnz);
        CHECK(inc.unz == full.unz);
    }

    TEST_CASE("incremental: random single-column changes")
    {
        std::mt19937_64 rng(30);
        for (int t = 0; t < 50; ++t) {
            auto f = natural(gallery::random_diagonally_dominant(30, 2, 300 + t));
            FactorOptions opt;
            opt.panel_cap = 1 + t % 5;
            auto fac = factorize(f.a, f.sym, f.plan, opt);
            const Index j = static_cast<Index>(rng() % 30);
            auto a2 = change_column(f.a, j, 0.7);
            std::vector<Index> recomputed;
            auto inc = refactorize_incremental(fac, a2, {j}, &recomputed);
            auto full = factorize(a2, fac.layout, opt);
            for (std::size_t k = 0; k < full.lnz.size(); ++k) {
                CHECK(std::abs(inc.lnz[k] - full.lnz[k]) <= 1e-12);
                CHECK(std::abs(inc.unz[k] - full.unz[k]) <= 1e-12);
            }
            // oracle closure: walk parents from min(i, j) of every entry in column j
            std::vector<char> mark(30, 0);
            auto cp = f.a.col_ptr();
            auto ri = f.a.row_idx();
            for (Index p = cp[j]; p < cp[j + 1]; ++p) {
                for (Index k = std::min(ri[p], j); k != kNone; k = f.sym.tree.parent[k]) {
                    mark[k] = 1;
                }
            }
            std::vector<Index> closure;
            for (Index k = 0; k < 30; ++k) {
                if (mark[k]) {
                    closure.push_back(k);
                }
            }
            CHECK(recomputed == closure);
        }
    }

    TEST_CASE("incremental: errors")
    {
        auto f = natural(gallery::random_diagonally_dominant(10, 2, 4));
        auto fac = factorize(f.a, f.sym, f.plan);
        auto other = natural(gallery::random_diagonally_dominant(10, 2, 5));
        CHECK_THROWS_AS(refactorize_incremental(fac, other.a, {0}), std::invalid_argument);
        auto a2 = change_column(f.a, 3, 2.0);
        CHECK_THROWS_AS(refactorize_incremental(fac, a2, {4}), std::invalid_argument);
    }

    TEST_CASE("factor dump round trip")
    {
        SolverOptions opt;
        opt.matching = false;
        auto an = analyze(gallery::grid_laplacian(10), opt);
        auto fac = factorize(an, opt);
        const auto dir = std::filesystem::temp_directory_path() / "sparsedirect_dump_test";
        std::filesystem::create_directories(dir);
        write_factor_dump(fac, (dir / "f.json").string(), (dir / "f.bin").string());
        auto d = read_factor_dump((dir / "f.json").string());
        CHECK(d.n == 100);
        CHECK(d.xsuper == fac.layout->xsuper);
        CHECK(d.indx == fac.layout->indx);
        CHECK(d.sep_start == fac.layout->sep_start);
        CHECK(d.parts.size() == fac.layout->parts.size());
        CHECK(d.lnz == fac.lnz);
        CHECK(d.unz == fac.unz);
        CHECK(std::filesystem::file_size(dir / "f.bin") == 16 * fac.lnz.size());
        std::filesystem::remove_all(dir);
    }
}
