#include "sparsedirect/trisolve.hpp"

#include <algorithm>

namespace sparsedirect {

SolveWorkspace::SolveWorkspace(const SupernodalFactor& f) : r(f.n(), 0.0)
{
    const PanelLayout& L = *f.layout;
    if (L.parts.size() > 1) {
        t.assign(L.parts.size(), std::vector<double>(L.n - L.sep_start, 0.0));
    }
}

namespace {

// Column j of L occupies lnz[xlnz[j] + c + 1 ..) against rows(p)[c + 1 ..).

void forward_column(const PanelLayout& L, const double* lnz, Index j, double* r)
{
    const Index p = L.col_panel[j];
    const Index c = j - L.xsuper[p];
    const Index m = L.panel_rows(p);
    const Index* rows = L.indx.data() + L.xindx[p];
    const double* col = lnz + L.xlnz[j];
    const double rj = r[j];
    for (Index k = c + 1; k < m; ++k) {
        r[rows[k]] -= rj * col[k];
    }
}

void backward_column(const PanelLayout& L, const double* unz, Index j, double* r)
{
    const Index p = L.col_panel[j];
    const Index c = j - L.xsuper[p];
    const Index m = L.panel_rows(p);
    const Index* rows = L.indx.data() + L.xindx[p];
    const double* col = unz + L.xlnz[j];
    double s = r[j];
    for (Index k = c + 1; k < m; ++k) {
        s -= col[k] * r[rows[k]];
    }
    r[j] = s / col[c];
}

void check_diagonal(const SupernodalFactor& f)
{
    const PanelLayout& L = *f.layout;
    for (Index j = 0; j < L.n; ++j) {
        if (f.unz[L.xlnz[j] + j - L.xsuper[L.col_panel[j]]] == 0.0) {
            throw ZeroPivotError(j);
        }
    }
}

void check_size(const SupernodalFactor& f, std::size_t n)
{
    if (static_cast<Index>(n) != f.n()) {
        throw std::invalid_argument("trisolve: vector length does not match the factor");
    }
}

}  // namespace

void forward_reference(const SupernodalFactor& f, std::span<double> r)
{
    check_size(f, r.size());
    for (Index j = 0; j < f.n(); ++j) {
        forward_column(*f.layout, f.lnz.data(), j, r.data());
    }
}

void backward_reference(const SupernodalFactor& f, std::span<double> r)
{
    check_size(f, r.size());
    check_diagonal(f);
    for (Index j = f.n() - 1; j >= 0; --j) {
        backward_column(*f.layout, f.unz.data(), j, r.data());
    }
}

void forward(const SupernodalFactor& f, SolveWorkspace& w, int threads, WriteAudit* audit)
{
    const PanelLayout& L = *f.layout;
    check_size(f, w.r.size());
    const Index nparts = static_cast<Index>(L.parts.size());
    if (audit != nullptr) {
        audit->writes_by_part.assign(nparts, {});
    }
    if (nparts <= 1) {
        forward_reference(f, w.r);
        return;
    }

    const Index sep = L.sep_start;
    double* r = w.r.data();
    const double* lnz = f.lnz.data();
#pragma omp parallel for num_threads(std::max(threads, 1)) schedule(dynamic, 1)
    for (Index q = 0; q < nparts; ++q) {
        std::vector<double>& t = w.t[q];
        std::fill(t.begin(), t.end(), 0.0);
        const Index first = L.xsuper[L.parts[q].begin];
        const Index last = L.xsuper[L.parts[q].end];
        for (Index j = first; j < last; ++j) {
            const Index p = L.col_panel[j];
            const Index c = j - L.xsuper[p];
            const Index m = L.panel_rows(p);
            const Index* rows = L.indx.data() + L.xindx[p];
            const double* col = lnz + L.xlnz[j];
            const double rj = r[j];
            for (Index k = c + 1; k < m; ++k) {
                const Index i = rows[k];
                if (i < sep) {
                    r[i] -= rj * col[k];
                } else {
                    t[i - sep] += rj * col[k];
                }
            }
            if (audit != nullptr) {
                audit->writes_by_part[q].push_back(j);
                for (Index k = c + 1; k < m && rows[k] < sep; ++k) {
                    audit->writes_by_part[q].push_back(rows[k]);
                }
            }
        }
    }

    // gather in fixed part order
    for (Index i = sep; i < L.n; ++i) {
        double s = 0.0;
        for (Index q = 0; q < nparts; ++q) {
            s += w.t[q][i - sep];
        }
        r[i] -= s;
    }
    for (Index j = sep; j < L.n; ++j) {
        forward_column(L, lnz, j, r);
    }
}

void backward(const SupernodalFactor& f, SolveWorkspace& w, int threads, WriteAudit* audit)
{
    const PanelLayout& L = *f.layout;
    check_size(f, w.r.size());
    check_diagonal(f);
    const Index nparts = static_cast<Index>(L.parts.size());
    if (audit != nullptr) {
        audit->writes_by_part.assign(nparts, {});
    }
    if (nparts <= 1) {
        backward_reference(f, w.r);
        return;
    }

    double* r = w.r.data();
    const double* unz = f.unz.data();
    for (Index j = L.n - 1; j >= L.sep_start; --j) {
        backward_column(L, unz, j, r);
    }
#pragma omp parallel for num_threads(std::max(threads, 1)) schedule(dynamic, 1)
    for (Index q = 0; q < nparts; ++q) {
        const Index first = L.xsuper[L.parts[q].begin];
        const Index last = L.xsuper[L.parts[q].end];
        for (Index j = last - 1; j >= first; --j) {
            backward_column(L, unz, j, r);
            if (audit != nullptr) {
                audit->writes_by_part[q].push_back(j);
            }
        }
    }
}

}  // namespace sparsedirect
