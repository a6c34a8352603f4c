#include "sparsedirect/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <bit>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sparsedirect {

// ---------------------------------------------------------------------------
// Parts and layout

PartPlan build_parts(const SymbolicFactor& sym, const OrderingResult* ordering)
{
    const Index n = sym.fill.n();
    PartPlan single{{{0, n}}, n};
    if (n == 0) {
        return {{}, 0};
    }
    if (ordering == nullptr || ordering->tree.empty() || ordering->tree[0].leaf) {
        return single;
    }
    const SeparatorNode& root = ordering->tree[0];
    if (root.begin != 0 || root.end != n) {
        return single;
    }
    PartPlan plan;
    plan.sep_start = root.sep_begin;
    for (Index c : root.children) {
        plan.parts.push_back({ordering->tree[c].begin, ordering->tree[c].end});
    }
    std::sort(plan.parts.begin(), plan.parts.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
    Index expect = 0;
    for (const auto& r : plan.parts) {
        if (r.begin != expect || r.end <= r.begin) {
            return single;
        }
        expect = r.end;
    }
    if (expect != plan.sep_start) {
        return single;
    }
    // every update leaving a part must land in the separator
    for (const auto& r : plan.parts) {
        for (Index j = r.begin; j < r.end; ++j) {
            for (Index i : sym.fill.column(j)) {
                if (i >= r.end && i < plan.sep_start) {
                    return single;
                }
            }
        }
    }
    return plan;
}

std::shared_ptr<const PanelLayout> build_layout(const CscMatrix& a, const SymbolicFactor& sym,
                                                const PartPlan& plan, const FactorOptions& opt)
{
    const Index n = sym.fill.n();
    if (a.n() != n) {
        throw std::invalid_argument("build_layout: dimension mismatch");
    }
    if (opt.panel_cap < 1) {
        throw std::invalid_argument("build_layout: panel_cap must be positive");
    }
    auto layout = std::make_shared<PanelLayout>();
    PanelLayout& L = *layout;
    L.n = n;
    L.tree = sym.tree;
    L.matrix_pattern = a.pattern();

    // the matrix pattern must lie inside the filled pattern
    const SparsityPattern apat = a.pattern();
    for (Index j = 0; j < n; ++j) {
        for (Index i : apat.column(j)) {
            if (i == j) {
                continue;
            }
            const Index lo = std::min(i, j), hi = std::max(i, j);
            if (!sym.fill.contains(hi, lo)) {
                throw std::invalid_argument("build_layout: matrix entry outside the symbolic pattern");
            }
        }
    }

    std::vector<char> cut(n + 1, 0);
    cut[0] = cut[n] = 1;
    for (Index s : sym.supernodes.xsuper) {
        cut[s] = 1;
    }
    for (const auto& r : plan.parts) {
        cut[r.begin] = cut[r.end] = 1;
    }
    cut[std::clamp<Index>(plan.sep_start, 0, n)] = 1;
    L.xsuper.push_back(0);
    for (Index j = 1; j <= n; ++j) {
        if (cut[j] || j - L.xsuper.back() == opt.panel_cap) {
            L.xsuper.push_back(j);
        }
    }
    if (n == 0) {
        L.xsuper.assign(1, 0);
    }

    const Index np = static_cast<Index>(L.xsuper.size()) - 1;
    L.col_panel.assign(n, 0);
    L.xindx.assign(np + 1, 0);
    L.xlnz.assign(n + 1, 0);
    for (Index p = 0; p < np; ++p) {
        const Index f = L.xsuper[p], l = L.xsuper[p + 1];
        L.indx.push_back(f);
        for (Index i : sym.fill.column(f)) {
            L.indx.push_back(i);
        }
        L.xindx[p + 1] = static_cast<Index>(L.indx.size());
        const Index m = L.xindx[p + 1] - L.xindx[p];
        if (m < l - f) {
            throw std::logic_error("build_layout: panel rows do not cover panel columns");
        }
        for (Index j = f; j < l; ++j) {
            L.col_panel[j] = p;
            L.xlnz[j + 1] = L.xlnz[j] + m;
        }
    }

    // parts as panel ranges
    for (const auto& r : plan.parts) {
        L.parts.push_back({L.col_panel[r.begin], r.end == n ? np : L.col_panel[r.end]});
    }
    L.sep_start = plan.sep_start;
    L.sep_panel = plan.sep_start >= n ? np : L.col_panel[plan.sep_start];

    L.updaters.assign(np, {});
    for (Index d = 0; d < np; ++d) {
        auto rows = L.rows(d);
        Index last = kNone;
        for (std::size_t k = static_cast<std::size_t>(L.panel_width(d)); k < rows.size(); ++k) {
            const Index q = L.col_panel[rows[k]];
            if (q != last) {
                L.updaters[q].push_back(d);
                last = q;
            }
        }
    }

    std::vector<Index> height(np, 0);
    Index max_h = np > 0 ? 0 : -1;
    for (Index p = 0; p < np; ++p) {
        const Index parent_col = L.tree.parent[L.xsuper[p + 1] - 1];
        if (parent_col != kNone) {
            const Index q = L.col_panel[parent_col];
            height[q] = std::max(height[q], height[p] + 1);
        }
        max_h = std::max(max_h, height[p]);
    }
    L.panel_levels.assign(max_h + 1, {});
    for (Index p = 0; p < np; ++p) {
        L.panel_levels[height[p]].push_back(p);
    }

    // row-wise view of the matrix pattern
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    L.row_ptr.assign(n + 1, 0);
    for (Index p = 0; p < a.nnz(); ++p) {
        ++L.row_ptr[ri[p] + 1];
    }
    std::partial_sum(L.row_ptr.begin(), L.row_ptr.end(), L.row_ptr.begin());
    L.row_col.resize(a.nnz());
    L.row_src.resize(a.nnz());
    std::vector<Index> next(L.row_ptr.begin(), L.row_ptr.end() - 1);
    for (Index j = 0; j < n; ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            const Index w = next[ri[p]]++;
            L.row_col[w] = j;
            L.row_src[w] = p;
        }
    }
    return layout;
}

// ---------------------------------------------------------------------------
// Entry access

namespace {

Index local_row(const PanelLayout& L, Index p, Index i)
{
    auto rows = L.rows(p);
    auto it = std::lower_bound(rows.begin(), rows.end(), i);
    return (it == rows.end() || *it != i) ? kNone : static_cast<Index>(it - rows.begin());
}

}  // namespace

double SupernodalFactor::l_entry(Index i, Index j) const
{
    if (i == j) {
        return 1.0;
    }
    if (i < j) {
        return 0.0;
    }
    const Index p = layout->col_panel[j];
    const Index r = local_row(*layout, p, i);
    return r == kNone ? 0.0 : lnz[layout->xlnz[j] + r];
}

double SupernodalFactor::u_entry(Index i, Index j) const
{
    if (i > j) {
        return 0.0;
    }
    // U(i, j) lives in column i of U^T at row j
    const Index p = layout->col_panel[i];
    const Index r = local_row(*layout, p, j);
    return r == kNone ? 0.0 : unz[layout->xlnz[i] + r];
}

double SupernodalFactor::max_abs_entry() const
{
    double m = 0.0;
    for (double x : lnz) {
        m = std::max(m, std::abs(x));
    }
    for (double x : unz) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Panel kernel

namespace {

/// Factorizes columns [xsuper[p] + c0, xsuper[p+1]) of panel p. Columns before c0
/// must already hold their final values. `relpos` is an n-sized scratch array.
void factor_panel(const PanelLayout& L, Index p, Index c0, std::span<const double> avals, SupernodalFactor& F,
                  std::vector<Index>& relpos)
{
    const Index f = L.xsuper[p];
    const Index w = L.panel_width(p);
    const Index m = L.panel_rows(p);
    auto rows = L.rows(p);
    double* lp = F.lnz.data() + L.xlnz[f];
    double* up = F.unz.data() + L.xlnz[f];

    for (Index r = 0; r < m; ++r) {
        relpos[rows[r]] = r;
    }
    std::fill(lp + c0 * m, lp + w * m, 0.0);
    std::fill(up + c0 * m, up + w * m, 0.0);

    // gather A: column j below the diagonal into L, row j from the diagonal on into U^T
    const auto cp = L.matrix_pattern.col_ptr();
    const auto ri = L.matrix_pattern.row_idx();
    for (Index c = c0; c < w; ++c) {
        const Index j = f + c;
        for (Index k = cp[j]; k < cp[j + 1]; ++k) {
            if (ri[k] > j) {
                lp[c * m + relpos[ri[k]]] = avals[k];
            }
        }
        for (Index k = L.row_ptr[j]; k < L.row_ptr[j + 1]; ++k) {
            if (L.row_col[k] >= j) {
                up[c * m + relpos[L.row_col[k]]] = avals[L.row_src[k]];
            }
        }
    }

    // updates from descendant panels, ascending
    for (Index d : L.updaters[p]) {
        const Index fd = L.xsuper[d];
        const Index wd = L.panel_width(d);
        const Index md = L.panel_rows(d);
        auto drows = L.rows(d);
        const double* ld = F.lnz.data() + L.xlnz[fd];
        const double* ud = F.unz.data() + L.xlnz[fd];
        const Index q0 = std::lower_bound(drows.begin(), drows.end(), f + c0) - drows.begin();
        const Index q1 = std::lower_bound(drows.begin() + q0, drows.end(), f + w) - drows.begin();
        for (Index q = q0; q < q1; ++q) {
            const Index c = relpos[drows[q]];  // target column within this panel
            double* lcol = lp + c * m;
            double* ucol = up + c * m;
            for (Index qq = q; qq < md; ++qq) {
                double sum_l = 0.0;
                double sum_u = 0.0;
                for (Index k = 0; k < wd; ++k) {
                    sum_l += ld[k * md + qq] * ud[k * md + q];
                    sum_u += ld[k * md + q] * ud[k * md + qq];
                }
                const Index r = relpos[drows[qq]];
                if (qq > q) {
                    lcol[r] -= sum_l;
                }
                ucol[r] -= sum_u;
            }
        }
    }

    // dense trapezoidal LU inside the panel, no row exchanges
    for (Index c = 0; c < w; ++c) {
        double* lc = lp + c * m;
        double* uc = up + c * m;
        if (c >= c0) {
            double pivot = uc[c];
            const Index j = f + c;
            if (std::abs(pivot) < F.pivot_floor || pivot == 0.0) {
                pivot = pivot < 0.0 ? -F.pivot_floor : F.pivot_floor;
                uc[c] = pivot;
                F.perturbed[j] = 1;
            } else {
                F.perturbed[j] = 0;
            }
            for (Index r = c + 1; r < m; ++r) {
                lc[r] /= pivot;
            }
        }
        for (Index c2 = std::max(c + 1, c0); c2 < w; ++c2) {
            const double l_c2 = lc[c2];  // L(f + c2, f + c)
            const double u_c2 = uc[c2];  // U(f + c, f + c2)
            double* l2 = lp + c2 * m;
            double* u2 = up + c2 * m;
            for (Index r = c2 + 1; r < m; ++r) {
                l2[r] -= lc[r] * u_c2;
            }
            for (Index r = c2; r < m; ++r) {
                u2[r] -= l_c2 * uc[r];
            }
        }
    }
}

double pivot_floor_for(std::span<const double> values, double scale)
{
    double m = 0.0;
    for (double v : values) {
        m = std::max(m, std::abs(v));
    }
    return scale * (m > 0.0 ? m : 1.0);
}

}  // namespace

SupernodalFactor factorize(const CscMatrix& a, std::shared_ptr<const PanelLayout> layout, const FactorOptions& opt)
{
    const PanelLayout& L = *layout;
    if (!(a.pattern() == L.matrix_pattern)) {
        throw std::invalid_argument("factorize: matrix pattern differs from the layout's");
    }
    SupernodalFactor F;
    F.layout = layout;
    F.lnz.assign(L.storage_size(), 0.0);
    F.unz.assign(L.storage_size(), 0.0);
    F.perturbed.assign(L.n, 0);
    F.pivot_floor = pivot_floor_for(a.values(), opt.pivot_scale);
    F.source_values.assign(a.values().begin(), a.values().end());
    const auto avals = a.values();

    if (opt.threads <= 1) {
        std::vector<Index> relpos(L.n, 0);
        for (Index p = 0; p < L.panel_count(); ++p) {
            factor_panel(L, p, 0, avals, F, relpos);
        }
    } else {
        // panels of one level only read panels of lower levels and write their own storage
        for (const auto& level : L.panel_levels) {
            const Index count = static_cast<Index>(level.size());
#pragma omp parallel num_threads(opt.threads)
            {
                std::vector<Index> relpos(L.n, 0);
#pragma omp for schedule(dynamic, 1)
                for (Index k = 0; k < count; ++k) {
                    factor_panel(L, level[k], 0, avals, F, relpos);
                }
            }
        }
    }
    F.perturbations = std::count(F.perturbed.begin(), F.perturbed.end(), 1);
    return F;
}

SupernodalFactor factorize(const CscMatrix& a, const SymbolicFactor& sym, const PartPlan& plan,
                           const FactorOptions& opt)
{
    return factorize(a, build_layout(a, sym, plan, opt), opt);
}

SupernodalFactor refactorize_incremental(const SupernodalFactor& f, const CscMatrix& a,
                                         const std::vector<Index>& changed_cols, std::vector<Index>* recomputed)
{
    SupernodalFactor out = f;
    refactorize_incremental_in_place(out, a, changed_cols, recomputed);
    return out;
}

void refactorize_incremental_in_place(SupernodalFactor& f, const CscMatrix& a,
                                      const std::vector<Index>& changed_cols, std::vector<Index>* recomputed)
{
    const PanelLayout& L = *f.layout;
    if (!(a.pattern() == L.matrix_pattern)) {
        throw std::invalid_argument("refactorize_incremental: sparsity pattern mismatch");
    }
    const auto cp = a.col_ptr();
    const auto ri = a.row_idx();
    const auto vals = a.values();

    std::vector<char> in_changed(L.n, 0);
    for (Index j : changed_cols) {
        if (j < 0 || j >= L.n) {
            throw std::invalid_argument("refactorize_incremental: changed column out of range");
        }
        in_changed[j] = 1;
    }
    std::vector<Index> seeds;
    for (Index j = 0; j < L.n; ++j) {
        for (Index k = cp[j]; k < cp[j + 1]; ++k) {
            if (vals[k] == f.source_values[k]) {
                continue;
            }
            if (!in_changed[j]) {
                throw std::invalid_argument("refactorize_incremental: column " + std::to_string(j) +
                                            " changed but is not listed");
            }
            seeds.push_back(std::min(ri[k], j));
        }
    }
    const std::vector<Index> dirty = L.tree.ancestor_closure(seeds);
    if (recomputed != nullptr) {
        *recomputed = dirty;
    }

    if (dirty.empty()) {
        return;
    }
    std::copy(vals.begin(), vals.end(), f.source_values.begin());

    std::vector<Index> relpos(L.n, 0);
    std::size_t next = 0;
    while (next < dirty.size()) {
        const Index p = L.col_panel[dirty[next]];
        const Index c0 = dirty[next] - L.xsuper[p];
        // ancestors of a panel column are the later columns of the same panel
        while (next < dirty.size() && L.col_panel[dirty[next]] == p) {
            ++next;
        }
        factor_panel(L, p, c0, vals, f, relpos);
    }
    f.perturbations = std::count(f.perturbed.begin(), f.perturbed.end(), 1);
}

// ---------------------------------------------------------------------------
// Debug dump

namespace {

void put_le(std::ostream& out, double x)
{
    auto bits = std::bit_cast<std::uint64_t>(x);
    unsigned char buf[8];
    for (int k = 0; k < 8; ++k) {
        buf[k] = static_cast<unsigned char>(bits >> (8 * k));
    }
    out.write(reinterpret_cast<const char*>(buf), 8);
}

double get_le(const unsigned char* buf)
{
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) {
        bits = (bits << 8) | buf[k];
    }
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_factor_dump(const SupernodalFactor& f, const std::string& json_path, const std::string& blob_path)
{
    const PanelLayout& L = *f.layout;
    nlohmann::json j;
    j["n"] = L.n;
    j["xsuper"] = L.xsuper;
    j["xlnz"] = L.xlnz;
    j["xindx"] = L.xindx;
    j["indx"] = L.indx;
    auto parts = nlohmann::json::array();
    for (const auto& r : L.parts) {
        parts.push_back({L.xsuper[r.begin], L.xsuper[r.end]});
    }
    j["parts"] = parts;
    j["sep_start"] = L.sep_start;
    j["perturbations"] = f.perturbations;
    j["blob"] = {{"path", std::filesystem::path(blob_path).filename().string()},
                 {"format", "float64 little-endian: lnz then unz"},
                 {"count", f.lnz.size()}};
    std::ofstream js(json_path);
    js << j.dump(1) << '\n';
    std::ofstream blob(blob_path, std::ios::binary);
    for (double x : f.lnz) {
        put_le(blob, x);
    }
    for (double x : f.unz) {
        put_le(blob, x);
    }
    if (!js || !blob) {
        throw std::runtime_error("write_factor_dump: cannot write output");
    }
}

FactorDump read_factor_dump(const std::string& json_path)
{
    std::ifstream js(json_path);
    if (!js) {
        throw std::runtime_error("read_factor_dump: cannot open " + json_path);
    }
    const auto j = nlohmann::json::parse(js);
    FactorDump d;
    d.n = j.at("n").get<Index>();
    d.xsuper = j.at("xsuper").get<std::vector<Index>>();
    d.xlnz = j.at("xlnz").get<std::vector<Index>>();
    d.xindx = j.at("xindx").get<std::vector<Index>>();
    d.indx = j.at("indx").get<std::vector<Index>>();
    for (const auto& r : j.at("parts")) {
        d.parts.emplace_back(r.at(0).get<Index>(), r.at(1).get<Index>());
    }
    d.sep_start = j.at("sep_start").get<Index>();
    d.perturbations = j.at("perturbations").get<Index>();
    const auto count = j.at("blob").at("count").get<std::size_t>();
    const auto blob_path = std::filesystem::path(json_path).parent_path() / j.at("blob").at("path").get<std::string>();
    std::ifstream blob(blob_path, std::ios::binary);
    std::vector<unsigned char> raw(16 * count);
    blob.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (blob.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw std::runtime_error("read_factor_dump: blob too short");
    }
    d.lnz.resize(count);
    d.unz.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        d.lnz[k] = get_le(raw.data() + 8 * k);
        d.unz[k] = get_le(raw.data() + 8 * (count + k));
    }
    return d;
}

}  // namespace sparsedirect
