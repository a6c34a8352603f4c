#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sparsedirect/gallery.hpp"
#include "sparsedirect/solver.hpp"
#include "sparsedirect/sparse_ops.hpp"
#include "sparsedirect/trisolve.hpp"

using namespace sparsedirect;

namespace {

SupernodalFactor natural_factor(const CscMatrix& a)
{
    auto sym = supernode_partition(symmetrized_pattern(a));
    return factorize(a, sym, build_parts(sym, nullptr));
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

double rel_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return den > 0.0 ? num / den : num;
}

std::vector<double> random_vector(Index n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) {
        x = d(rng);
    }
    return v;
}

struct Multipart {
    Analysis an;
    SupernodalFactor f;
};

Multipart multipart(Index k, Index panel_cap)
{
    SolverOptions opt;
    opt.matching = false;
    opt.nd_leaf_size = 12;
    opt.panel_cap = panel_cap;
    auto an = analyze(gallery::grid_laplacian(k), opt);
    // make the matrix unsymmetric with the same pattern
    CscMatrix t = an.transformed;
    auto v = t.mutable_values();
    for (std::size_t p = 0; p < v.size(); ++p) {
        v[p] *= 1.0 + 0.01 * static_cast<double>(p % 7);
    }
    auto f = factorize(t, an.layout, opt.factor_options());
    return {std::move(an), std::move(f)};
}

}  // namespace

TEST_SUITE("trisolve")
{
    TEST_CASE("identity factor leaves r unchanged")
    {
        auto f = natural_factor(CscMatrix::identity(4));
        SolveWorkspace w(f);
        w.r = {1, 2, 3, 4};
        forward(f, w);
        CHECK(w.r == std::vector<double>{1, 2, 3, 4});
        backward(f, w);
        CHECK(w.r == std::vector<double>{1, 2, 3, 4});
    }

    TEST_CASE("partition example")
    {
        const auto a = gallery::two_way_partition_example();
        auto f = natural_factor(a);
        SolveWorkspace w(f);
        w.r = {0, 0, 0, 0, 0, 1};
        forward(f, w);
        CHECK(w.r == std::vector<double>{0, 0, 0, 0, 0, 1});

        w.r = multiply(a, std::vector<double>(6, 1.0));
        forward(f, w);
        backward(f, w);
        for (double x : w.r) {
            CHECK(std::abs(x - 1.0) <= 1e-12);
        }
    }

    TEST_CASE("random factors against dense substitution")
    {
        std::mt19937_64 rng(100);
        for (int t = 0; t < 100; ++t) {
            auto f = natural_factor(gallery::random_diagonally_dominant(25, 3, 9000 + t));
            const auto b = random_vector(25, rng);
            SolveWorkspace w(f);
            w.r = b;
            forward(f, w);
            const auto y = oracle::forward_subst(dense_l(f), b);
            CHECK(rel_diff(w.r, y) <= 1e-12);
            backward(f, w);
            const auto x = oracle::backward_subst(dense_u(f), y);
            CHECK(rel_diff(w.r, x) <= 1e-12);
        }
    }

    TEST_CASE("multipart solve matches dense substitution and the reference")
    {
        std::mt19937_64 rng(7);
        for (Index cap : {1, 4, 128}) {
            auto [an, f] = multipart(12, cap);
            REQUIRE(f.layout->parts.size() >= 2);
            const auto b = random_vector(f.n(), rng);
            SolveWorkspace w(f);
            w.r = b;
            forward(f, w);
            const auto l = dense_l(f);
            const auto y = oracle::forward_subst(l, b);
            CHECK(rel_diff(w.r, y) <= 1e-12);
            std::vector<double> ref = b;
            forward_reference(f, ref);
            CHECK(rel_diff(w.r, ref) <= 1e-13);

            backward(f, w);
            const auto x = oracle::backward_subst(dense_u(f), y);
            CHECK(rel_diff(w.r, x) <= 1e-12);
            backward_reference(f, ref);
            CHECK(rel_diff(w.r, ref) <= 1e-13);
        }
    }

    TEST_CASE("single part reduces to the plain loops bitwise")
    {
        auto f = natural_factor(gallery::random_diagonally_dominant(40, 3, 3));
        REQUIRE(f.layout->parts.size() == 1);
        std::mt19937_64 rng(1);
        const auto b = random_vector(40, rng);
        SolveWorkspace w(f);
        w.r = b;
        forward(f, w, 4);
        backward(f, w, 4);
        std::vector<double> ref = b;
        forward_reference(f, ref);
        backward_reference(f, ref);
        CHECK(w.r == ref);
    }

    TEST_CASE("bitwise identical for any worker count")
    {
        auto [an, f] = multipart(20, 16);
        std::mt19937_64 rng(2);
        const auto b = random_vector(f.n(), rng);
        SolveWorkspace w1(f);
        w1.r = b;
        forward(f, w1, 1);
        const auto y1 = w1.r;
        backward(f, w1, 1);
        for (int threads : {2, 4, 8}) {
            SolveWorkspace w(f);
            w.r = b;
            forward(f, w, threads);
            CHECK(w.r == y1);
            backward(f, w, threads);
            CHECK(w.r == w1.r);
        }
    }

    TEST_CASE("parts write disjoint entries outside the separator")
    {
        auto [an, f] = multipart(16, 8);
        SolveWorkspace w(f);
        std::fill(w.r.begin(), w.r.end(), 1.0);
        for (int pass = 0; pass < 2; ++pass) {
            WriteAudit audit;
            if (pass == 0) {
                forward(f, w, 4, &audit);
            } else {
                backward(f, w, 4, &audit);
            }
            REQUIRE(audit.writes_by_part.size() == f.layout->parts.size());
            std::vector<int> owner(f.n(), -1);
            for (std::size_t q = 0; q < audit.writes_by_part.size(); ++q) {
                CHECK(!audit.writes_by_part[q].empty());
                for (Index i : audit.writes_by_part[q]) {
                    CHECK(i < f.layout->sep_start);
                    CHECK((owner[i] == -1 || owner[i] == static_cast<int>(q)));
                    owner[i] = static_cast<int>(q);
                }
            }
        }
    }

    TEST_CASE("zero diagonal in U is reported")
    {
        auto f = natural_factor(CscMatrix::identity(3));
        f.unz[f.layout->xlnz[1]] = 0.0;
        SolveWorkspace w(f);
        try {
            backward(f, w);
            FAIL("expected ZeroPivotError");
        } catch (const ZeroPivotError& e) {
            CHECK(e.column() == 1);
        }
    }
}
