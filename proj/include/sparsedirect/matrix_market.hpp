#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsedirect/csc_matrix.hpp"

namespace sparsedirect {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads a Matrix Market coordinate file (real or integer, general or symmetric).
/// Symmetric files are expanded, duplicates summed and explicit zeros dropped.
CscMatrix load_matrix_market(std::istream& in);
CscMatrix load_matrix_market_file(const std::string& path);

/// Writes `%%MatrixMarket matrix coordinate real general` with round-trip precision.
void write_matrix_market(std::ostream& out, const CscMatrix& a);

/// Plain text vector, one value per line. Blank lines and `%` comments are skipped.
std::vector<double> load_vector(std::istream& in);
std::vector<double> load_vector_file(const std::string& path);
void write_vector(std::ostream& out, const std::vector<double>& v);

}  // namespace sparsedirect
