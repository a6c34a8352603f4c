// Serial against OpenMP factorization and triangular solves on grid Laplacians.
#include <benchmark/benchmark.h>

#include <map>

#include "sparsedirect/gallery.hpp"
#include "sparsedirect/solver.hpp"
#include "sparsedirect/trisolve.hpp"

using namespace sparsedirect;

namespace {

struct Problem {
    CscMatrix a;
    Analysis an;
};

const Problem& problem(Index k)
{
    static std::map<Index, Problem> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        Problem p;
        p.a = gallery::grid_laplacian(k);
        SolverOptions opt;
        opt.matching = false;
        p.an = analyze(p.a, opt);
        it = cache.emplace(k, std::move(p)).first;
    }
    return it->second;
}

void BM_Factorize(benchmark::State& state)
{
    const Problem& p = problem(state.range(0));
    FactorOptions opt;
    opt.threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto f = factorize(p.an.transformed, p.an.layout, opt);
        benchmark::DoNotOptimize(f.lnz.data());
    }
    state.counters["n"] = static_cast<double>(p.a.n());
}

void BM_Trisolve(benchmark::State& state)
{
    const Problem& p = problem(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    const auto f = factorize(p.an.transformed, p.an.layout);
    SolveWorkspace w(f);
    for (auto _ : state) {
        std::fill(w.r.begin(), w.r.end(), 1.0);
        forward(f, w, threads);
        backward(f, w, threads);
        benchmark::DoNotOptimize(w.r.data());
    }
}

void BM_TrisolveReference(benchmark::State& state)
{
    const Problem& p = problem(state.range(0));
    const auto f = factorize(p.an.transformed, p.an.layout);
    std::vector<double> r(f.n());
    for (auto _ : state) {
        std::fill(r.begin(), r.end(), 1.0);
        forward_reference(f, r);
        backward_reference(f, r);
        benchmark::DoNotOptimize(r.data());
    }
}

}  // namespace

BENCHMARK(BM_Factorize)->ArgsProduct({{64, 128}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trisolve)->ArgsProduct({{64, 128}, {1, 2, 4, 8}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TrisolveReference)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
