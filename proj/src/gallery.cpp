#include "sparsedirect/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace sparsedirect::gallery {

namespace {

using Triplets = std::vector<CscMatrix::Triplet>;

CscMatrix dense_rows(const std::vector<std::vector<double>>& rows)
{
    const Index n = static_cast<Index>(rows.size());
    Triplets t;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (rows[i][j] != 0.0) {
                t.push_back({i, j, rows[i][j]});
            }
        }
    }
    return CscMatrix::from_triplets(n, std::move(t));
}

}  // namespace

CscMatrix grid_laplacian(Index k)
{
    Triplets t;
    auto id = [k](Index x, Index y) { return y * k + x; };
    for (Index y = 0; y < k; ++y) {
        for (Index x = 0; x < k; ++x) {
            const Index v = id(x, y);
            t.push_back({v, v, 4.0});
            if (x > 0) t.push_back({v, id(x - 1, y), -1.0});
            if (x + 1 < k) t.push_back({v, id(x + 1, y), -1.0});
            if (y > 0) t.push_back({v, id(x, y - 1), -1.0});
            if (y + 1 < k) t.push_back({v, id(x, y + 1), -1.0});
        }
    }
    return CscMatrix::from_triplets(k * k, std::move(t));
}

CscMatrix random_diagonally_dominant(Index n, Index per_col, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> row(0, n - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    Triplets t;
    std::vector<double> row_sum(n, 0.0), col_sum(n, 0.0);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < per_col; ++k) {
            const Index i = row(rng);
            if (i == j) {
                continue;
            }
            const double v = val(rng);
            t.push_back({i, j, v});
            row_sum[i] += std::abs(v);
            col_sum[j] += std::abs(v);
        }
    }
    for (Index i = 0; i < n; ++i) {
        const double d = std::max(row_sum[i], col_sum[i]) + 1.0 + std::abs(val(rng));
        t.push_back({i, i, val(rng) < 0.0 ? -d : d});
    }
    return CscMatrix::from_triplets(n, std::move(t));
}

CscMatrix random_nonsingular(Index n, Index per_col, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Index> hidden(n);
    std::iota(hidden.begin(), hidden.end(), 0);
    std::shuffle(hidden.begin(), hidden.end(), rng);
    std::uniform_int_distribution<Index> row(0, n - 1);
    std::uniform_real_distribution<double> mant(0.5, 1.0);
    std::uniform_real_distribution<double> expo(-6.0, 6.0);
    auto value = [&] { return (mant(rng) < 0.75 ? 1.0 : -1.0) * mant(rng) * std::pow(10.0, expo(rng)); };
    Triplets t;
    for (Index j = 0; j < n; ++j) {
        t.push_back({hidden[j], j, value()});
        for (Index k = 0; k < per_col; ++k) {
            t.push_back({row(rng), j, value()});
        }
    }
    return CscMatrix::from_triplets(n, std::move(t));
}

CscMatrix west_like(std::uint64_t seed)
{
    constexpr Index n = 479;
    std::mt19937_64 rng(seed);
    std::vector<Index> hidden(n);
    std::iota(hidden.begin(), hidden.end(), 0);
    std::shuffle(hidden.begin(), hidden.end(), rng);
    std::uniform_int_distribution<Index> near(-12, 12);
    std::uniform_int_distribution<Index> far(0, n - 1);
    std::uniform_int_distribution<int> extra(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> row_scale(n);
    for (double& s : row_scale) {
        s = std::pow(10.0, 8.0 * unit(rng) - 4.0);
    }
    Triplets t;
    for (Index j = 0; j < n; ++j) {
        // the hidden transversal carries the large entries
        t.push_back({hidden[j], j, row_scale[hidden[j]] * (2.0 + 8.0 * unit(rng))});
        const int m = extra(rng);
        for (int k = 0; k < m; ++k) {
            const Index i = unit(rng) < 0.7 ? (hidden[j] + near(rng) + n) % n : far(rng);
            if (i == j) {
                continue;  // keep most diagonal positions empty
            }
            const double v = (unit(rng) < 0.5 ? -1.0 : 1.0) * unit(rng);
            t.push_back({i, j, row_scale[i] * v});
        }
    }
    return CscMatrix::from_triplets(n, std::move(t));
}

CscMatrix perfect_matching_example()
{
    return dense_rows({{1, 3, 0, 2, 0, 0},
                       {3, 0, 0, 4, 0, 1},
                       {0, 0, 0, 0, 3, 0},
                       {2, 4, 0, 0, 1, 0},
                       {0, 0, 3, 1, 0, 0},
                       {0, 1, 0, 0, 0, 2}});
}

CscMatrix two_way_partition_example()
{
    return dense_rows({{2, 0, 0, 0, 4, 1},
                       {0, 3, 0, 0, 0, 1},
                       {0, 0, 3, 0, 0, 0},
                       {0, 0, 0, 2, 1, 0},
                       {1, 0, 0, 0, 3, 2},
                       {3, 0, 0, 1, 0, 4}});
}

}  // namespace sparsedirect::gallery
