#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsedirect/numeric.hpp"

namespace sparsedirect {

class ZeroPivotError : public std::runtime_error {
public:
    explicit ZeroPivotError(Index column)
        : std::runtime_error("zero diagonal in U at column " + std::to_string(column)), column_(column)
    {
    }
    Index column() const { return column_; }

private:
    Index column_;
};

/// r carries the right-hand side in and the solution out. t holds one dense
/// array per part over the separator range.
struct SolveWorkspace {
    std::vector<double> r;
    std::vector<std::vector<double>> t;

    explicit SolveWorkspace(const SupernodalFactor& f);
};

/// Indices of r written by each part during the parallel phase of the last call.
struct WriteAudit {
    std::vector<std::vector<Index>> writes_by_part;
};

/// L y = r, in place. Parts run concurrently; their updates into the separator
/// go through t and are gathered in part order before the separator is solved.
void forward(const SupernodalFactor& f, SolveWorkspace& w, int threads = 1, WriteAudit* audit = nullptr);

/// U x = r, in place. The separator is solved first, then the parts concurrently.
void backward(const SupernodalFactor& f, SolveWorkspace& w, int threads = 1, WriteAudit* audit = nullptr);

/// Plain column-by-column substitution over all columns, no parts.
void forward_reference(const SupernodalFactor& f, std::span<double> r);
void backward_reference(const SupernodalFactor& f, std::span<double> r);

}  // namespace sparsedirect
