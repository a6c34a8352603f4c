#pragma once

#include <iosfwd>

namespace sparsedirect {

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitSingular = 3,
    kExitResidual = 4,
};

/// Entry point of the `sparsedirect` tool. Solutions and CSV go to `out`
/// unless a file is given; diagnostics and the summary go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparsedirect
