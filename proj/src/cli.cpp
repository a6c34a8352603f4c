#include "sparsedirect/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsedirect/matrix_market.hpp"
#include "sparsedirect/solver.hpp"
#include "sparsedirect/sparse_ops.hpp"

namespace sparsedirect {

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::string& readable(const std::string& path)
{
    if (!std::ifstream(path)) {
        throw InputError("cannot open '" + path + "'");
    }
    return path;
}

struct Flags {
    std::string matrix;
    std::string matching = "on";
    std::string ordering = "nd";
    Index nd_leaf_size = 64;
    int threads = 1;
    std::string rhs = "ones";
    std::string dump_dominance;
    std::string report;
    std::string solution;
    std::string csv;
    double residual_tol = 1e-6;
    std::uint64_t seed = 42;
    int reps = 3;

    SolverOptions options() const
    {
        SolverOptions o;
        o.matching = matching == "on";
        o.ordering = ordering == "md"        ? OrderingMethod::MinimumDegree
                     : ordering == "natural" ? OrderingMethod::Natural
                                             : OrderingMethod::NestedDissection;
        o.nd_leaf_size = nd_leaf_size;
        o.threads = threads;
        return o;
    }
};

json times_json(const StageTimes& t)
{
    return {{"matching", t.matching},
            {"ordering", t.ordering},
            {"symbolic", t.symbolic},
            {"factorize", t.factorize},
            {"solve", t.solve}};
}

json base_report(const std::string& command, const Flags& f, const CscMatrix& a)
{
    return {{"schema", 1},
            {"command", command},
            {"matrix", std::filesystem::path(f.matrix).stem().string()},
            {"n", a.n()},
            {"nnz", a.nnz()},
            {"matching", f.matching},
            {"ordering", f.ordering},
            {"threads", f.threads}};
}

void add_analysis(json& rep, const CscMatrix& a, const Analysis& an, const Flags& f)
{
    const auto& sn = an.symbolic.supernodes;
    const Index nnz_lu = an.symbolic.nnz_lu();
    rep["nnz_lu"] = nnz_lu;
    rep["fill_factor"] = a.nnz() > 0 ? static_cast<double>(nnz_lu) / static_cast<double>(a.nnz()) : 0.0;
    rep["supernodes"] = {{"count", sn.count()},
                         {"max_size", sn.sizes.empty() ? 0 : *std::max_element(sn.sizes.begin(), sn.sizes.end())}};
    std::map<Index, Index> histogram;
    for (Index s : sn.sizes) {
        ++histogram[s];
    }
    json hist = json::object();
    for (auto [size, count] : histogram) {
        hist[std::to_string(size)] = count;
    }
    rep["supernodes"]["histogram"] = hist;
    rep["fill_nnz"] = an.symbolic.fill.nnz();
    rep["parts"] = an.plan.parts.size();
    rep["separator_size"] = a.n() - an.plan.sep_start;

    const auto before = dominance_profile(a);
    const CscMatrix matched =
        apply_transform(a, an.row_perm.compose(an.col_perm.inverse()), Permutation::identity(a.n()), an.scaling);
    const auto after = dominance_profile(matched);
    rep["dominance"] = {{"before", count_dominant_rows(before)}, {"after", count_dominant_rows(after)}};

    if (!f.dump_dominance.empty()) {
        auto b = before, c = after;
        std::sort(b.begin(), b.end(), std::greater<>());
        std::sort(c.begin(), c.end(), std::greater<>());
        std::ofstream csv(f.dump_dominance);
        csv << "rank,before,after\n" << std::setprecision(17);
        for (std::size_t k = 0; k < b.size(); ++k) {
            csv << k << ',' << b[k] << ',' << c[k] << '\n';
        }
    }
}

void write_report(const json& rep, const Flags& f, std::ostream& err)
{
    if (!f.report.empty()) {
        std::ofstream js(f.report);
        js << rep.dump(2) << '\n';
    }
    err << rep.dump() << '\n';
}

int cmd_analyze(const Flags& f, std::ostream&, std::ostream& err)
{
    const CscMatrix a = load_matrix_market_file(readable(f.matrix));
    json rep = base_report("analyze", f, a);
    const Analysis an = analyze(a, f.options());
    add_analysis(rep, a, an, f);
    rep["etree"] = an.symbolic.tree.parent;
    rep["times"] = times_json(an.times);
    rep["exit_code"] = kExitOk;
    write_report(rep, f, err);
    return kExitOk;
}

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err)
{
    const CscMatrix a = load_matrix_market_file(readable(f.matrix));
    std::vector<double> b = f.rhs == "ones" ? std::vector<double>(a.n(), 1.0) : load_vector_file(readable(f.rhs));
    if (static_cast<Index>(b.size()) != a.n()) {
        throw ParseError(0, "right-hand side has " + std::to_string(b.size()) + " entries, expected " +
                                std::to_string(a.n()));
    }
    json rep = base_report("solve", f, a);
    const SolverOptions opt = f.options();
    Analysis an = analyze(a, opt);
    add_analysis(rep, a, an, f);

    const auto t0 = std::chrono::steady_clock::now();
    const SupernodalFactor fac = factorize(an, opt);
    const auto t1 = std::chrono::steady_clock::now();
    const std::vector<double> x = solve_with(an, fac, b, opt.threads);
    const auto t2 = std::chrono::steady_clock::now();
    an.times.factorize = std::chrono::duration<double>(t1 - t0).count();
    an.times.solve = std::chrono::duration<double>(t2 - t1).count();

    const double res = relative_residual(a, x, b);
    const int code = res <= f.residual_tol ? kExitOk : kExitResidual;
    rep["residual"] = res;
    rep["residual_tol"] = f.residual_tol;
    rep["perturbations"] = fac.perturbations;
    rep["growth"] = fac.max_abs_entry();
    rep["times"] = times_json(an.times);
    rep["exit_code"] = code;

    if (f.solution.empty()) {
        write_vector(out, x);
    } else {
        std::ofstream sol(f.solution);
        write_vector(sol, x);
    }
    write_report(rep, f, err);
    return code;
}

int cmd_bench(const Flags& f, std::ostream& out, std::ostream& err)
{
    const CscMatrix a = load_matrix_market_file(readable(f.matrix));
    json rep = base_report("bench", f, a);
    const Analysis an = analyze(a, f.options());
    add_analysis(rep, a, an, f);
    const auto rows = incremental_sweep(an, f.seed, f.reps);

    std::ofstream file;
    if (!f.csv.empty()) {
        file.open(f.csv);
    }
    std::ostream& csv = f.csv.empty() ? out : file;
    csv << "k,closure,t_incremental,t_full\n" << std::setprecision(9);
    json sweep = json::array();
    for (const auto& r : rows) {
        csv << r.k << ',' << r.closure << ',' << r.t_incremental << ',' << r.t_full << '\n';
        sweep.push_back({{"k", r.k}, {"closure", r.closure}, {"max_diff", r.max_diff}});
    }
    rep["seed"] = f.seed;
    rep["sweep"] = sweep;
    rep["times"] = times_json(an.times);
    rep["exit_code"] = kExitOk;
    write_report(rep, f, err);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sparse direct LU solver with matching, nested dissection and supernodal factorization",
                 "sparsedirect"};
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 ok, 2 usage or parse error, 3 structurally singular, 4 residual above tolerance.\n"
        "bench CSV columns: k (perturbed columns), closure (recomputed columns), t_incremental and t_full\n"
        "(thread CPU seconds, fastest of --reps interleaved runs).");

    Flags f;
    auto common = [&f](CLI::App* sub) {
        sub->add_option("matrix", f.matrix, "Matrix Market file")->required();
        sub->add_option("--matching", f.matching, "Maximum-weight matching and scaling")
            ->check(CLI::IsMember({"on", "off"}))
            ->capture_default_str();
        sub->add_option("--ordering", f.ordering, "Fill-reducing ordering")
            ->check(CLI::IsMember({"nd", "md", "natural"}))
            ->capture_default_str();
        sub->add_option("--nd-leaf-size", f.nd_leaf_size, "Subgraph size at which dissection stops")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--dump-dominance", f.dump_dominance, "Write sorted dominance ratios as CSV");
        sub->add_option("--report", f.report, "Write the JSON report here");
        sub->add_option("--residual-tol", f.residual_tol, "Residual limit for exit code 4")->capture_default_str();
        sub->add_option("--seed", f.seed, "Seed for random perturbations")->capture_default_str();
    };
    auto* analyze_cmd = app.add_subcommand("analyze", "Matching, ordering and symbolic analysis");
    common(analyze_cmd);
    auto* solve_cmd = app.add_subcommand("solve", "Factorize and solve");
    common(solve_cmd);
    solve_cmd->add_option("--rhs", f.rhs, "Right-hand side file, one value per line, or 'ones'")
        ->capture_default_str();
    solve_cmd->add_option("--solution", f.solution, "Write the solution here instead of stdout");
    auto* bench_cmd = app.add_subcommand("bench", "Incremental against full refactorization sweep");
    common(bench_cmd);
    bench_cmd->add_option("--csv", f.csv, "Write the CSV here instead of stdout");
    bench_cmd->add_option("--reps", f.reps, "Repetitions per sweep point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (analyze_cmd->parsed()) {
            return cmd_analyze(f, out, err);
        }
        if (solve_cmd->parsed()) {
            return cmd_solve(f, out, err);
        }
        return cmd_bench(f, out, err);
    } catch (const ParseError& e) {
        err << "error: " << f.matrix << ": " << e.what() << '\n';
        return kExitParse;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const StructurallySingular& e) {
        json rep = {{"schema", 1},
                    {"matrix", std::filesystem::path(f.matrix).stem().string()},
                    {"n", e.n()},
                    {"cardinality", e.cardinality()},
                    {"exit_code", kExitSingular}};
        write_report(rep, f, err);
        err << "error: " << e.what() << '\n';
        return kExitSingular;
    }
}

}  // namespace sparsedirect
