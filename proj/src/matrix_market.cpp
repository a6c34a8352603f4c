#include "sparsedirect/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace sparsedirect {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

CscMatrix load_matrix_market(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) {
        throw ParseError(1, "empty input");
    }
    ++lineno;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
        throw ParseError(lineno, "missing %%MatrixMarket banner");
    }
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix" || format != "coordinate") {
        throw ParseError(lineno, "only 'matrix coordinate' files are supported");
    }
    if (field == "pattern") {
        throw ParseError(lineno, "pattern-only files carry no values");
    }
    if (field != "real" && field != "integer") {
        throw ParseError(lineno, "unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw ParseError(lineno, "unsupported symmetry '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    // size line
    Index rows = 0, cols = 0, entries = 0;
    for (;;) {
        if (!std::getline(in, line)) {
            throw ParseError(lineno + 1, "missing size line");
        }
        ++lineno;
        if (!line.empty() && line[0] == '%') {
            continue;
        }
        if (blank(line)) {
            continue;
        }
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
            throw ParseError(lineno, "malformed size line");
        }
        break;
    }
    if (rows != cols) {
        throw ParseError(lineno, "matrix is not square (" + std::to_string(rows) + " x " + std::to_string(cols) + ")");
    }

    std::vector<CscMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
    Index read = 0;
    while (read < entries) {
        if (!std::getline(in, line)) {
            throw ParseError(lineno + 1, "expected " + std::to_string(entries) + " entries, found " +
                                             std::to_string(read));
        }
        ++lineno;
        if (!line.empty() && line[0] == '%') {
            continue;
        }
        if (blank(line)) {
            continue;
        }
        std::istringstream es(line);
        Index i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j)) {
            throw ParseError(lineno, "malformed entry");
        }
        if (!(es >> v)) {
            throw ParseError(lineno, "entry is missing its value");
        }
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError(lineno, "index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
        }
        triplets.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) {
            triplets.push_back({j - 1, i - 1, v});
        }
        ++read;
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!blank(line) && line[0] != '%') {
            throw ParseError(lineno, "more entries than declared");
        }
    }
    return CscMatrix::from_triplets(rows, std::move(triplets));
}

CscMatrix load_matrix_market_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return load_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CscMatrix& a)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n() << ' ' << a.n() << ' ' << a.nnz() << '\n';
    auto cp = a.col_ptr();
    auto ri = a.row_idx();
    auto va = a.values();
    out << std::setprecision(17);
    for (Index j = 0; j < a.n(); ++j) {
        for (Index p = cp[j]; p < cp[j + 1]; ++p) {
            out << ri[p] + 1 << ' ' << j + 1 << ' ' << va[p] << '\n';
        }
    }
}

std::vector<double> load_vector(std::istream& in)
{
    std::vector<double> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line) || line[0] == '%') {
            continue;
        }
        std::istringstream ls(line);
        double x = 0.0;
        if (!(ls >> x)) {
            throw ParseError(lineno, "expected a decimal value");
        }
        v.push_back(x);
    }
    return v;
}

std::vector<double> load_vector_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return load_vector(in);
}

void write_vector(std::ostream& out, const std::vector<double>& v)
{
    out << std::setprecision(17);
    for (double x : v) {
        out << x << '\n';
    }
}

}  // namespace sparsedirect
